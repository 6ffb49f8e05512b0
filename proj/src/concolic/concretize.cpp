// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/concolic/concretize.hpp>

#include <algorithm>

namespace sctest::concolic
{
namespace
{
constexpr unsigned opaque_degree = 64;

bool has_vars(const SymRef& e)
{
    return !inputs_of(e).empty();
}

bool is_nonlinear_node(const SymExpr& e)
{
    if (e.kind != SymExpr::Kind::Binop)
        return false;
    const auto& a = e.args[0];
    const auto& b = e.args[1];
    switch (e.op)
    {
    case SymOp::MUL:
        return has_vars(a) && has_vars(b);
    case SymOp::EXP:
        return has_vars(b) || (has_vars(a) && !(is_const(b) && b->value < U256{2}));
    case SymOp::DIV:
    case SymOp::MOD:
        return has_vars(b);
    default:
        return false;
    }
}

/// Rebuilds e with `f` applied top-down; f returns nullptr to descend.
SymRef rewrite(const SymRef& e, const std::function<SymRef(const SymRef&)>& f)
{
    if (auto r = f(e))
        return r;
    if (e->args.empty())
        return e;
    std::vector<SymRef> args;
    bool changed = false;
    for (const auto& a : e->args)
    {
        args.push_back(rewrite(a, f));
        changed = changed || args.back() != a;
    }
    if (!changed)
        return e;
    switch (e->kind)
    {
    case SymExpr::Kind::Unop:
        return unop(e->op, args[0]);
    case SymExpr::Kind::Binop:
        return binop(e->op, args[0], args[1]);
    case SymExpr::Kind::Keccak:
        return keccak(std::move(args), e->size);
    case SymExpr::Kind::Sload:
        return sload(args[0]);
    default:
        return e;
    }
}

/// Equality of the first `size` bytes of two word lists.
SymRef words_equal(const std::vector<SymRef>& a, const std::vector<SymRef>& b, uint32_t size)
{
    SymRef all = constant(1);
    for (uint32_t i = 0; 32 * i < size; ++i)
    {
        SymRef x = i < a.size() ? a[i] : constant(0);
        SymRef y = i < b.size() ? b[i] : constant(0);
        const uint32_t n = std::min<uint32_t>(32, size - 32 * i);
        if (n < 32)
        {
            const auto drop = constant(U256{8u * (32u - n)});
            x = binop(SymOp::SHR, drop, x);
            y = binop(SymOp::SHR, drop, y);
        }
        all = binop(SymOp::AND, all, binop(SymOp::EQ, x, y));
    }
    return all;
}

std::vector<SymRef> words_of(const Bytes& data)
{
    std::vector<SymRef> out;
    for (size_t i = 0; i < data.size(); i += 32)
    {
        std::array<uint8_t, 32> w{};
        std::copy_n(data.begin() + static_cast<std::ptrdiff_t>(i), std::min<size_t>(32, data.size() - i), w.begin());
        out.push_back(constant(U256::from_be(w)));
    }
    return out;
}

SymRef rewrite_hash_equality(const SymRef& p, const PreimageTable* preimages)
{
    if (p->kind == SymExpr::Kind::Unop && p->op == SymOp::ISZERO)
    {
        const auto inner = rewrite_hash_equality(p->args[0], preimages);
        return inner == p->args[0] ? p : unop(SymOp::ISZERO, inner);
    }
    if (p->kind != SymExpr::Kind::Binop || p->op != SymOp::EQ)
        return p;
    const auto& a = p->args[0];
    const auto& b = p->args[1];
    const bool ka = a->kind == SymExpr::Kind::Keccak;
    const bool kb = b->kind == SymExpr::Kind::Keccak;
    if (ka && kb)
        return a->size == b->size ? words_equal(a->args, b->args, a->size) : constant(0);
    if ((ka && is_const(b)) || (kb && is_const(a)))
    {
        const auto& k = ka ? a : b;
        const auto& c = ka ? b : a;
        const auto pre = preimages ? preimages->find(c->value) : std::nullopt;
        if (!pre)
            return p;
        return pre->size() == k->size ? words_equal(k->args, words_of(*pre), k->size) : constant(0);
    }
    return p;
}
}  // namespace

unsigned degree_in(const SymRef& e, const VarId& v)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
        return 0;
    case SymExpr::Kind::Input:
        return e->var == v ? 1 : 0;
    case SymExpr::Kind::Keccak:
    case SymExpr::Kind::Sload:
        return inputs_of(e).count(v) ? opaque_degree : 0;
    case SymExpr::Kind::Unop:
        return degree_in(e->args[0], v);
    case SymExpr::Kind::Binop:
        break;
    }
    const unsigned a = degree_in(e->args[0], v);
    const unsigned b = degree_in(e->args[1], v);
    switch (e->op)
    {
    case SymOp::MUL:
        return std::min(a + b, opaque_degree);
    case SymOp::EXP:
        if (b > 0)
            return opaque_degree;
        if (is_const(e->args[1]))
            return e->args[1]->value < U256{opaque_degree} ? std::min<unsigned>(
                                                                 a * static_cast<unsigned>(e->args[1]->value.low64()),
                                                                 opaque_degree)
                                                           : (a ? opaque_degree : 0);
        return a ? opaque_degree : 0;
    case SymOp::DIV:
    case SymOp::MOD:
        return b > 0 ? opaque_degree : a;
    case SymOp::SHL:
    case SymOp::SHR:
        return a > 0 ? opaque_degree : b;
    default:
        return std::max(a, b);
    }
}

bool has_nonlinear_term(const SymRef& e)
{
    if (is_nonlinear_node(*e))
        return true;
    return std::any_of(e->args.begin(), e->args.end(), [](const SymRef& a) { return has_nonlinear_term(a); });
}

std::optional<VarId> preferred_unknown(const SymRef& pred)
{
    std::optional<VarId> best;
    unsigned best_degree = 0;
    for (const auto& v : inputs_of(pred))
    {
        if (v.kind == VarKind::length)
            continue;
        const unsigned d = degree_in(pred, v);
        if (!best || d < best_degree)
        {
            best = v;
            best_degree = d;
        }
    }
    return best;
}

SymRef concretize_nonlinear(const SymRef& pred, const Assignment& env, std::optional<VarId> keep)
{
    if (inputs_of(pred).empty())
        throw Error(ErrorCode::NoSymbolicInput, "predicate " + render(pred) + " has no symbolic input");
    if (!has_nonlinear_term(pred))
        return pred;
    if (!keep)
        keep = preferred_unknown(pred);
    return rewrite(pred, [&](const SymRef& e) -> SymRef {
        if (!is_nonlinear_node(*e))
            return nullptr;
        std::map<VarId, U256> values;
        for (const auto& v : inputs_of(e))
            if (!keep || v != *keep)
                values[v] = env.get(v);
        return pin(e, values);
    });
}

SymRef concretize_keccak(const SymRef& pred, const Assignment& env, const PreimageTable* preimages)
{
    const auto top = rewrite_hash_equality(pred, preimages);
    return rewrite(top, [&](const SymRef& e) -> SymRef {
        if (e->kind != SymExpr::Kind::Keccak)
            return nullptr;
        const auto vars = inputs_of(e);
        if (!std::all_of(vars.begin(), vars.end(), [&](const VarId& v) { return env.has(v); }))
            return nullptr;
        return constant(eval(e, env));
    });
}

std::vector<SymRef> split_conjuncts(const SymRef& pred)
{
    if (pred->kind == SymExpr::Kind::Binop && pred->op == SymOp::AND && pred->args[0]->ub <= 1 &&
        pred->args[1]->ub <= 1)
    {
        auto out = split_conjuncts(pred->args[0]);
        const auto rest = split_conjuncts(pred->args[1]);
        out.insert(out.end(), rest.begin(), rest.end());
        return out;
    }
    return {pred};
}

std::optional<std::vector<AbiValue>> concretize_loop(const FunctionSig& fn, const std::vector<AbiValue>& args,
    unsigned attempt)
{
    if (attempt >= std::size(loop_lengths) ||
        std::none_of(fn.params.begin(), fn.params.end(), [](const auto& t) { return t.is_dynamic(); }))
        return std::nullopt;
    auto out = args;
    for (size_t p = 0; p < fn.params.size() && p < out.size(); ++p)
    {
        const auto& t = fn.params[p];
        if (!t.is_dynamic())
            continue;
        const bool bytes = t.kind == bytecode::AbiType::Kind::bytes;
        const size_t current = bytes ? out[p].bytes.size() : out[p].items.size();
        const size_t want = attempt == 0 ? std::max<size_t>(current, 1)
                                         : std::max<size_t>(current, loop_lengths[attempt]);
        if (bytes)
            out[p].bytes.resize(want, 0);
        else
            out[p].items.resize(want, U256{});
    }
    return out;
}

}  // namespace sctest::concolic
