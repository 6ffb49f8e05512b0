// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/evm/interpreter.hpp>
#include <sctest/fuzzing/mutator.hpp>

#include <algorithm>
#include <set>

namespace sctest::fuzzing
{
Address TargetContext::sender_of(const TargetCall& call) const
{
    if (!call.sender.empty())
    {
        const auto it = target.aliases.find(call.sender);
        if (it == target.aliases.end())
            throw Error(ErrorCode::InvalidTarget, "unknown alias " + call.sender);
        return it->second;
    }
    return bundle.genesis.accounts.empty() ? Address{} : bundle.genesis.accounts.front().address;
}

evm::Transaction TargetContext::make(const TargetCall& call, std::vector<AbiValue> args) const
{
    const auto* fn = bundle.function(call.function);
    if (!fn)
        throw Error(ErrorCode::InvalidTarget, "unknown function " + call.function);
    return evm::make_tx(*fn, std::move(args), sender_of(call), contract(), call.value, call.delay);
}

namespace
{
std::vector<AbiValue> seeds_of(const TargetCall& call)
{
    std::vector<AbiValue> out;
    for (const auto& a : call.args)
        out.push_back(a.value);
    return out;
}
}  // namespace

std::vector<evm::Transaction> TargetContext::setup_txs() const
{
    std::vector<evm::Transaction> out;
    for (const auto& c : target.setup)
        out.push_back(make(c, seeds_of(c)));
    return out;
}

TestCase TargetContext::seed_testcase() const
{
    TestCase tc;
    tc.txs = setup_txs();
    tc.origin.assign(tc.txs.size(), -1);
    for (size_t k = 0; k < target.fuzz.size(); ++k)
    {
        tc.txs.push_back(make(target.fuzz[k], seeds_of(target.fuzz[k])));
        tc.origin.push_back(static_cast<int>(k));
    }
    assign_id(tc);
    return tc;
}

std::vector<Address> TargetContext::address_pool() const
{
    std::set<Address> pool{Address{}, contract()};
    for (const auto& [n, a] : target.aliases)
        pool.insert(a);
    for (const auto& acc : bundle.genesis.accounts)
        pool.insert(acc.address);
    return {pool.begin(), pool.end()};
}

std::vector<U256> boundary_values(unsigned bits, const U256& seed)
{
    const U256 mask = low_mask(bits);
    return {U256{}, U256{1}, mask, U256{1} << (bits - 1), (seed + U256{1}) & mask, (seed - U256{1}) & mask};
}

namespace
{
uint64_t below(Rng& rng, uint64_t n)
{
    return n == 0 ? 0 : rng() % n;
}

U256 random_word(unsigned bits, Rng& rng)
{
    // A random effective width first, so small values are as likely as large ones.
    const unsigned width = 1 + static_cast<unsigned>(below(rng, bits));
    const U256 w{rng(), rng(), rng(), rng()};
    return w & low_mask(width);
}
}  // namespace

U256 mutate_word(const U256& current, unsigned bits, const U256& seed, WordMutation how, Rng& rng)
{
    switch (how)
    {
    case WordMutation::boundary:
    {
        const auto set = boundary_values(bits, seed);
        return set[below(rng, set.size())];
    }
    case WordMutation::random:
        return random_word(bits, rng);
    case WordMutation::bit_flip:
        return (current ^ (U256{1} << static_cast<unsigned>(below(rng, bits)))) & low_mask(bits);
    }
    return current;
}

namespace
{
/// Recovers which fuzz call produced each transaction when the origin is missing.
std::vector<int> origins(const TestCase& tc, const FuzzTarget& target)
{
    if (tc.origin.size() == tc.txs.size())
        return tc.origin;
    std::vector<int> out;
    for (size_t i = 0; i < tc.txs.size(); ++i)
    {
        int o = -1;
        if (i >= target.setup.size())
            for (size_t k = 0; k < target.fuzz.size(); ++k)
                if (target.fuzz[k].function == tc.txs[i].function_call)
                {
                    o = static_cast<int>(k);
                    break;
                }
        out.push_back(o);
    }
    return out;
}

WordMutation pick_how(Rng& rng)
{
    return static_cast<WordMutation>(below(rng, 3));
}

void mutate_arg(AbiValue& v, const AbiType& type, const AbiValue& seed, const TargetContext& ctx, Rng& rng)
{
    switch (type.kind)
    {
    case AbiType::Kind::uint:
        v.word = mutate_word(v.word, type.bits, seed.word, pick_how(rng), rng);
        break;
    case AbiType::Kind::address:
    {
        const auto pool = ctx.address_pool();
        v.word = pool[below(rng, pool.size())].to_word();
        break;
    }
    case AbiType::Kind::boolean:
        v.word = v.word.is_zero() ? U256{1} : U256{};
        break;
    case AbiType::Kind::bytes:
        switch (below(rng, 4))
        {
        case 0:
            if (v.bytes.size() < max_bytes_len)
                v.bytes.push_back(static_cast<uint8_t>(rng()));
            break;
        case 1:
            if (!v.bytes.empty())
                v.bytes.pop_back();
            break;
        case 2:
            if (!v.bytes.empty())
                v.bytes[below(rng, v.bytes.size())] ^= static_cast<uint8_t>(1u << below(rng, 8));
            break;
        default:
            v.bytes.resize(below(rng, 65));
            for (auto& b : v.bytes)
                b = static_cast<uint8_t>(rng());
        }
        break;
    case AbiType::Kind::uint_array:
    {
        const auto op = v.items.empty() ? 0 : below(rng, 3);
        if (op == 0 && v.items.size() < max_array_items)
        {
            const U256 s = v.items.size() < seed.items.size() ? seed.items[v.items.size()] : U256{};
            v.items.push_back(mutate_word(s, type.bits, s, below(rng, 2) ? WordMutation::boundary
                                                                          : WordMutation::random, rng));
        }
        else if (op == 1)
            v.items.pop_back();
        else if (!v.items.empty())
        {
            const size_t i = below(rng, v.items.size());
            const U256 s = i < seed.items.size() ? seed.items[i] : U256{};
            v.items[i] = mutate_word(v.items[i], type.bits, s, pick_how(rng), rng);
        }
        break;
    }
    }
}
}  // namespace

TestCase mutate(const TestCase& tc, const TargetContext& ctx, Rng& rng, std::span<const TestCase* const> splice_pool)
{
    const auto& target = ctx.target;
    const size_t nsetup = target.setup.size();
    const size_t max_seq = std::max<size_t>(4, 2 * target.fuzz.size());

    // Working form: template index and argument values of each fuzz transaction.
    struct Item
    {
        int k;
        std::vector<AbiValue> args;
    };
    std::vector<Item> seq;
    const auto orig = origins(tc, target);
    for (size_t i = nsetup; i < tc.txs.size(); ++i)
        if (orig[i] >= 0 && static_cast<size_t>(orig[i]) < target.fuzz.size())
            seq.push_back({orig[i], tc.txs[i].args});

    const int rounds = 1 + static_cast<int>(below(rng, 3));
    for (int r = 0; r < rounds; ++r)
    {
        std::vector<std::pair<size_t, size_t>> slots;
        for (size_t i = 0; i < seq.size(); ++i)
            for (size_t a = 0; a < seq[i].args.size(); ++a)
                if (target.fuzz[static_cast<size_t>(seq[i].k)].args[a].is_mutable)
                    slots.emplace_back(i, a);
        const bool can_swap = target.order == OrderMode::shuffle && seq.size() >= 2;
        const uint64_t roll = below(rng, 10);
        if (roll == 0 && can_swap)
        {
            const size_t i = below(rng, seq.size() - 1);
            std::swap(seq[i], seq[i + 1]);
        }
        else if (roll == 1 && !splice_pool.empty() && !seq.empty())
        {
            const TestCase* other = splice_pool[below(rng, splice_pool.size())];
            const auto oo = origins(*other, target);
            std::vector<Item> tail;
            for (size_t i = nsetup; i < other->txs.size(); ++i)
                if (oo[i] >= 0 && static_cast<size_t>(oo[i]) < target.fuzz.size())
                    tail.push_back({oo[i], other->txs[i].args});
            if (tail.empty())
                continue;
            const size_t keep = 1 + below(rng, seq.size());
            const size_t from = below(rng, tail.size());
            seq.resize(keep);
            seq.insert(seq.end(), tail.begin() + static_cast<std::ptrdiff_t>(from), tail.end());
            if (seq.size() > max_seq)
                seq.resize(max_seq);
        }
        else if (!slots.empty())
        {
            const auto [i, a] = slots[below(rng, slots.size())];
            const auto& call = target.fuzz[static_cast<size_t>(seq[i].k)];
            const auto* fn = ctx.bundle.function(call.function);
            mutate_arg(seq[i].args[a], fn->params[a], call.args[a].value, ctx, rng);
        }
        else if (can_swap)
        {
            const size_t i = below(rng, seq.size() - 1);
            std::swap(seq[i], seq[i + 1]);
        }
    }

    TestCase out;
    out.txs.assign(tc.txs.begin(), tc.txs.begin() + static_cast<std::ptrdiff_t>(std::min(nsetup, tc.txs.size())));
    out.origin.assign(out.txs.size(), -1);
    for (auto& item : seq)
    {
        out.txs.push_back(ctx.make(target.fuzz[static_cast<size_t>(item.k)], std::move(item.args)));
        out.origin.push_back(item.k);
    }
    assign_id(out);
    return out;
}

}  // namespace sctest::fuzzing
