// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/evm/calldata.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/fuzzing/detectors.hpp>

#include <algorithm>
#include <set>

namespace sctest::fuzzing
{
namespace
{
void validate(const FuzzTarget& target, const bytecode::ContractBundle& bundle)
{
    auto check_call = [&](const TargetCall& c) {
        const auto* fn = bundle.function(c.function);
        if (!fn)
            throw Error(ErrorCode::InvalidTarget, "unknown function " + c.function);
        if (fn->params.size() != c.args.size())
            throw Error(ErrorCode::InvalidTarget, c.function + ": wrong number of arguments");
        if (!c.sender.empty() && !target.aliases.count(c.sender))
            throw Error(ErrorCode::InvalidTarget, c.function + ": unknown alias " + c.sender);
        for (size_t i = 0; i < c.args.size(); ++i)
        {
            try
            {
                evm::check_value(fn->params[i], c.args[i].value);
            }
            catch (const Error& e)
            {
                throw Error(ErrorCode::InvalidTarget, c.function + ": " + e.what());
            }
        }
    };
    for (const auto& c : target.setup)
        check_call(c);
    for (const auto& c : target.fuzz)
        check_call(c);
}

std::vector<uint32_t> blocks_of(const bytecode::ContractBundle& bundle, const std::vector<std::vector<uint32_t>>& traces)
{
    std::set<uint32_t> s;
    for (const auto& t : traces)
        for (const uint32_t b : coverage::block_sequence(bundle, t))
            s.insert(b);
    return {s.begin(), s.end()};
}
}  // namespace

Campaign::Campaign(std::shared_ptr<const bytecode::ContractBundle> bundle, evm::EvmWorld world, FuzzTarget target,
    uint64_t rng_seed)
  : bundle_{std::move(bundle)}, world_{std::move(world)}, rng_{rng_seed}
{
    install_target(std::move(target));
}

void Campaign::install_target(FuzzTarget target)
{
    validate(target, *bundle_);
    target_ = std::move(target);
    schedule_.clear();
    scores_stale_ = true;
    pending_seed_ = true;

    const TargetContext ctx{*bundle_, target_};
    TestCase setup_only;
    setup_only.txs = ctx.setup_txs();
    setup_only.origin.assign(setup_only.txs.size(), -1);
    assign_id(setup_only);
    setup_ = std::make_shared<const evm::Snapshot>(evm::snapshot_of(world_, setup_only.txs));
    seed_ = ctx.seed_testcase();
    if (!setup_only.txs.empty())
        record(setup_only, setup_->results, setup_->world, false);
}

size_t Campaign::record(const TestCase& tc, const std::vector<evm::ExecResult>& results, const evm::EvmWorld& after,
    bool schedulable)
{
    const Address at = bundle_->genesis.contract_address;
    const size_t paths_before = coverage_.paths.size();
    size_t added = 0;
    std::vector<std::vector<uint32_t>> traces;
    for (size_t i = 0; i < results.size(); ++i)
    {
        added += coverage::merge(coverage_, *bundle_, at, results[i].trace);
        traces.push_back(results[i].trace);
        for (auto& f : detect_assert(results[i], tc.txs[i].function_call, *bundle_))
            bugs_.add(std::move(f), tc);
    }
    for (auto& f : detect_property_violations(after, *bundle_))
        bugs_.add(std::move(f), tc);
    const size_t new_paths = coverage_.paths.size() - paths_before;
    if (added > 0 || new_paths > 0)
    {
        corpus_.entries.push_back({tc, added, new_paths});
        if (schedulable)
            schedule_.push_back({corpus_.entries.size() - 1, 1, blocks_of(*bundle_, traces)});
        scores_stale_ = true;
    }
    return added;
}

size_t Campaign::execute(const TestCase& tc)
{
    const size_t nsetup = target_.setup.size();
    evm::EvmWorld w = setup_->world;
    std::vector<evm::ExecResult> results = setup_->results;
    for (size_t i = nsetup; i < tc.txs.size(); ++i)
    {
        try
        {
            results.push_back(evm::execute_tx_inplace(w, tc.txs[i]));
        }
        catch (const Error&)
        {
            break;  // e.g. a call value the sender cannot pay; the rest of the sequence is moot
        }
    }
    TestCase kept = tc;
    kept.txs.resize(results.size());
    kept.origin.resize(results.size(), -1);
    if (kept.txs.size() != tc.txs.size())
        assign_id(kept);
    // Setup results were recorded at install time; only the fuzzed part can add anything,
    // but the whole sequence is kept so the entry replays from genesis.
    return record(kept, results, w, true);
}

size_t Campaign::add_testcase(TestCase tc)
{
    evm::EvmWorld w = world_;
    std::vector<evm::ExecResult> results;
    for (const auto& tx : tc.txs)
        results.push_back(evm::execute_tx_inplace(w, tx));
    if (tc.id.empty())
        assign_id(tc);
    tc.origin.assign(tc.txs.size(), -1);
    return record(tc, results, w, false);
}

void Campaign::rescore()
{
    const auto& cfg = *bundle_->cfg;
    const Address at = bundle_->genesis.contract_address;
    for (auto& s : schedule_)
    {
        std::set<uint32_t> frontier;
        for (const uint32_t b : s.blocks)
            for (const uint32_t succ : cfg.blocks[b].succs)
                if (!coverage_.covered(at, cfg.blocks[succ].start_offset))
                    frontier.insert(succ);
        s.score = frontier.size() + 1;
    }
    scores_stale_ = false;
}

size_t Campaign::pick()
{
    if (scores_stale_)
        rescore();
    uint64_t total = 0;
    for (const auto& s : schedule_)
        total += s.score;
    uint64_t r = rng_() % total;
    for (const auto& s : schedule_)
    {
        if (r < s.score)
            return s.entry;
        r -= s.score;
    }
    return schedule_.back().entry;
}

size_t Campaign::run(uint64_t n, std::optional<std::chrono::steady_clock::time_point> deadline)
{
    size_t added = 0;
    const TargetContext ctx{*bundle_, target_};
    std::vector<const TestCase*> pool;
    size_t pool_size = SIZE_MAX;
    for (uint64_t i = 0; i < n; ++i)
    {
        if (deadline && (i & 63) == 0 && std::chrono::steady_clock::now() >= *deadline)
            break;
        if (pending_seed_)
        {
            pending_seed_ = false;
            added += execute(seed_);
        }
        else
        {
            if (pool_size != corpus_.entries.size())
            {
                pool.clear();
                for (const auto& s : schedule_)
                    pool.push_back(&corpus_.entries[s.entry].tc);
                pool_size = corpus_.entries.size();
            }
            const TestCase& parent = schedule_.empty() ? seed_ : corpus_.entries[pick()].tc;
            added += execute(mutate(parent, ctx, rng_, pool));
        }
        ++execs_;
        if (execs_ % iteration_execs == 0)
            history_.push_back(coverage_.covered_count());
    }
    return added;
}

CampaignResult Campaign::result() const
{
    return {coverage_, corpus_, bugs_, execs_, history_};
}

CampaignResult run_campaign(std::shared_ptr<const bytecode::ContractBundle> bundle, const evm::EvmWorld& world,
    const FuzzTarget& target, Budget budget, uint64_t rng_seed)
{
    Campaign c{bundle, world, target, rng_seed};
    std::optional<std::chrono::steady_clock::time_point> deadline;
    if (budget.seconds > 0)
        deadline = std::chrono::steady_clock::now() + std::chrono::seconds{budget.seconds};
    c.run(budget.execs, deadline);
    auto r = c.result();
    r.corpus = minimize_corpus(*bundle, world, r.corpus);
    return r;
}

}  // namespace sctest::fuzzing
