// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/concolic/concretize.hpp>
#include <sctest/concolic/solver.hpp>

#include <algorithm>
#include <set>
#include <stdexcept>

namespace sctest::concolic
{
const char* to_string(SolverResult::Status s) noexcept
{
    switch (s)
    {
    case SolverResult::Status::Sat:
        return "sat";
    case SolverResult::Status::Unsat:
        return "unsat";
    case SolverResult::Status::Unknown:
        return "unknown";
    }
    return "?";
}

namespace
{
// Sets of values as sorted, disjoint, inclusive intervals.
struct Interval
{
    U256 lo, hi;
};
using ValueSet = std::vector<Interval>;

ValueSet full(const U256& max)
{
    return {{U256{}, max}};
}

ValueSet intersect(const ValueSet& a, const ValueSet& b)
{
    ValueSet out;
    size_t i = 0, j = 0;
    while (i < a.size() && j < b.size())
    {
        const U256 lo = std::max(a[i].lo, b[j].lo);
        const U256 hi = std::min(a[i].hi, b[j].hi);
        if (lo <= hi)
            out.push_back({lo, hi});
        if (a[i].hi < b[j].hi)
            ++i;
        else
            ++j;
    }
    return out;
}

ValueSet complement(const ValueSet& a, const U256& max)
{
    ValueSet out;
    U256 next{};
    bool open = true;  // false once `next` wrapped past max
    for (const auto& iv : a)
    {
        if (iv.lo > next)
            out.push_back({next, iv.lo - U256{1}});
        if (iv.hi == max)
        {
            open = false;
            break;
        }
        next = iv.hi + U256{1};
    }
    if (open && next <= max)
        out.push_back({next, max});
    return out;
}

ValueSet normalize(ValueSet s)
{
    std::sort(s.begin(), s.end(), [](const Interval& x, const Interval& y) { return x.lo < y.lo; });
    ValueSet out;
    for (const auto& iv : s)
    {
        if (!out.empty() && out.back().hi != U256::max() && iv.lo <= out.back().hi + U256{1})
            out.back().hi = std::max(out.back().hi, iv.hi);
        else
            out.push_back(iv);
    }
    return out;
}

/// {lo, lo+1, ..., hi} counted upward modulo 2^256.
ValueSet wrap(const U256& lo, const U256& hi)
{
    if (lo <= hi)
        return {{lo, hi}};
    return normalize({{U256{}, hi}, {lo, U256::max()}});
}

/// Size of s, saturating at limit + 1.
uint64_t cardinality(const ValueSet& s, uint64_t limit)
{
    uint64_t n = 0;
    for (const auto& iv : s)
    {
        const U256 span = iv.hi - iv.lo;
        if (!span.fits_u64() || span.low64() >= limit)
            return limit + 1;
        n += span.low64() + 1;
        if (n > limit)
            return limit + 1;
    }
    return n;
}

/// a*x + c modulo 2^256.
struct Linear
{
    U256 a, c;
};

std::optional<Linear> linear(const SymRef& e, const VarId& x, unsigned bits)
{
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
        return Linear{U256{}, e->value};
    case SymExpr::Kind::Input:
        if (e->var == x)
            return Linear{U256{1}, U256{}};
        return std::nullopt;
    case SymExpr::Kind::Unop:
    {
        const auto l = linear(e->args[0], x, bits);
        if (!l)
            return std::nullopt;
        if (e->op == SymOp::NEG)
            return Linear{U256{} - l->a, U256{} - l->c};
        if (e->op == SymOp::NOT)
            return Linear{U256{} - l->a, U256{} - l->c - U256{1}};
        return std::nullopt;
    }
    case SymExpr::Kind::Binop:
        break;
    default:
        return std::nullopt;
    }
    const auto l = linear(e->args[0], x, bits);
    const auto r = linear(e->args[1], x, bits);
    if (!l || !r)
        return std::nullopt;
    switch (e->op)
    {
    case SymOp::ADD:
        return Linear{l->a + r->a, l->c + r->c};
    case SymOp::SUB:
        return Linear{l->a - r->a, l->c - r->c};
    case SymOp::MUL:
        if (l->a.is_zero())
            return Linear{l->c * r->a, l->c * r->c};
        if (r->a.is_zero())
            return Linear{l->a * r->c, l->c * r->c};
        return std::nullopt;
    case SymOp::SHL:
        if (l->a.is_zero())
        {
            const U256 k = l->c < U256{256} ? U256{1} << static_cast<unsigned>(l->c.low64()) : U256{};
            return Linear{r->a * k, r->c * k};
        }
        return std::nullopt;
    case SymOp::AND:
    {
        // A mask covering the whole declared width of x is the identity on x.
        const U256 dom = low_mask(bits);
        if (l->a.is_zero() && r->a == U256{1} && r->c.is_zero() && (l->c & dom) == dom)
            return r;
        if (r->a.is_zero() && l->a == U256{1} && l->c.is_zero() && (r->c & dom) == dom)
            return l;
        return std::nullopt;
    }
    default:
        return std::nullopt;
    }
}

unsigned trailing_zeros(const U256& v)
{
    for (unsigned i = 0; i < 256; ++i)
        if (v.bit(i))
            return i;
    return 256;
}

constexpr uint64_t max_points = 1024;

/// {x in [0, max] : a*x + c == 0 mod 2^256}
std::optional<ValueSet> zeros(const Linear& l, const U256& max)
{
    if (l.a.is_zero())
        return l.c.is_zero() ? full(max) : ValueSet{};
    const unsigned t = trailing_zeros(l.a);
    const U256 m = U256{} - l.c;
    if (!(m & low_mask(t)).is_zero())
        return ValueSet{};
    const U256 x0 = ((m >> t) * inverse_mod_2_256(l.a >> t)) & low_mask(256 - t);
    if (x0 > max)
        return ValueSet{};
    if (t == 0)
        return ValueSet{{x0, x0}};
    const U256 step = U256{1} << (256 - t);
    ValueSet out;
    U256 x = x0;
    for (uint64_t k = 0; k <= max_points; ++k)
    {
        out.push_back({x, x});
        const U256 next = x + step;
        if (next < x || next > max)
            return out;
        x = next;
    }
    return std::nullopt;
}

/// {x in [0, max] : lo <= a*x + c <= hi} for a = +-1.
std::optional<ValueSet> range(const Linear& l, const U256& lo, const U256& hi, const U256& max)
{
    if (lo > hi)
        return ValueSet{};
    if (l.a.is_zero())
        return (l.c >= lo && l.c <= hi) ? full(max) : ValueSet{};
    ValueSet s;
    if (l.a == U256{1})
        s = wrap(lo - l.c, hi - l.c);
    else if (l.a == U256::max())
        s = wrap(l.c - hi, l.c - lo);
    else
        return std::nullopt;
    return intersect(s, full(max));
}

std::optional<ValueSet> less_than(const SymRef& a, const SymRef& b, const VarId& x, unsigned bits, const U256& max)
{
    const auto la = linear(a, x, bits);
    const auto lb = linear(b, x, bits);
    if (!la || !lb)
        return std::nullopt;
    if (lb->a.is_zero())
    {
        if (lb->c.is_zero())
            return ValueSet{};
        return range(*la, U256{}, lb->c - U256{1}, max);
    }
    if (la->a.is_zero())
    {
        if (la->c == U256::max())
            return ValueSet{};
        return range(*lb, la->c + U256{1}, U256::max(), max);
    }
    return std::nullopt;
}

/// Values of x in [0, max] for which p is nonzero, when p has a recognised shape.
std::optional<ValueSet> solutions(const SymRef& p, const VarId& x, unsigned bits, const U256& max)
{
    if (is_const(p))
        return p->value.is_zero() ? ValueSet{} : full(max);
    if (p->kind == SymExpr::Kind::Unop && p->op == SymOp::ISZERO)
    {
        const auto& q = p->args[0];
        if (q->ub <= 1)
        {
            auto s = solutions(q, x, bits, max);
            if (!s)
                return std::nullopt;
            return complement(*s, max);
        }
        const auto l = linear(q, x, bits);
        return l ? zeros(*l, max) : std::nullopt;
    }
    if (p->kind == SymExpr::Kind::Binop)
    {
        switch (p->op)
        {
        case SymOp::EQ:
        {
            const auto la = linear(p->args[0], x, bits);
            const auto lb = linear(p->args[1], x, bits);
            if (!la || !lb)
                return std::nullopt;
            return zeros({la->a - lb->a, la->c - lb->c}, max);
        }
        case SymOp::LT:
            return less_than(p->args[0], p->args[1], x, bits, max);
        case SymOp::GT:
            return less_than(p->args[1], p->args[0], x, bits, max);
        default:
            break;
        }
    }
    const auto l = linear(p, x, bits);
    if (!l)
        return std::nullopt;
    const auto z = zeros(*l, max);
    if (!z)
        return std::nullopt;
    return complement(*z, max);
}

SolverResult unknown(std::string why)
{
    SolverResult r;
    r.status = SolverResult::Status::Unknown;
    r.reason = std::move(why);
    return r;
}

SolverResult unsat()
{
    SolverResult r;
    r.status = SolverResult::Status::Unsat;
    return r;
}

SolverResult solve_one(const std::vector<SymRef>& preds, const VarId& x, unsigned bits, const SolveOptions& opt)
{
    const U256 max = low_mask(bits);
    ValueSet s = full(max);
    std::vector<SymRef> residual;
    for (const auto& p : preds)
    {
        if (auto sol = solutions(p, x, bits, max))
            s = intersect(s, *sol);
        else
            residual.push_back(p);
        if (s.empty())
            return unsat();
    }
    SolverResult r;
    r.status = SolverResult::Status::Sat;
    if (residual.empty())
    {
        r.model[x] = s.front().lo;
        return r;
    }
    if (cardinality(s, opt.enumeration_limit) > opt.enumeration_limit)
        return unknown("nonlinear constraint over " + to_string(x) + " with a wide domain");
    Assignment env;
    for (const auto& iv : s)
    {
        for (U256 v = iv.lo;; v += U256{1})
        {
            env.values[x] = v;
            if (std::all_of(residual.begin(), residual.end(), [&](const SymRef& p) { return !eval(p, env).is_zero(); }))
            {
                r.model[x] = v;
                return r;
            }
            if (v == iv.hi)
                break;
        }
    }
    return unsat();
}

/// Every predicate has at most one unknown.
SolverResult solve_separately(const std::vector<SymRef>& preds, const std::map<VarId, unsigned>& widths,
    const SolveOptions& opt)
{
    std::map<VarId, std::vector<SymRef>> by_var;
    for (const auto& p : preds)
    {
        const auto vars = inputs_of(p);
        if (vars.empty())
        {
            if (p->value.is_zero())
                return unsat();
            continue;
        }
        by_var[*vars.begin()].push_back(p);
    }
    SolverResult out;
    out.status = SolverResult::Status::Sat;
    for (const auto& [x, ps] : by_var)
    {
        const auto it = widths.find(x);
        auto r = solve_one(ps, x, it == widths.end() ? 256 : it->second, opt);
        if (!r.sat())
            return r;
        out.model.insert(r.model.begin(), r.model.end());
    }
    return out;
}

std::vector<SymRef> pinned(const std::vector<SymRef>& preds, const std::map<VarId, U256>& values, const Assignment& env)
{
    std::vector<SymRef> out;
    for (const auto& p : preds)
        out.push_back(fold(values.empty() ? p : pin(p, values), env));
    return out;
}

/// Exhaustive search over a component whose combined domain is small; nullopt when it is not.
std::optional<SolverResult> solve_jointly(const std::vector<SymRef>& preds, const std::set<VarId>& members,
    const std::map<VarId, unsigned>& widths, const SolveOptions& opt)
{
    const std::vector<VarId> vars(members.begin(), members.end());
    unsigned total_bits = 0;
    for (const auto& v : vars)
        total_bits += widths.at(v);
    if (total_bits >= 64 || (uint64_t{1} << total_bits) > opt.enumeration_limit)
        return std::nullopt;
    Assignment env;
    std::vector<uint64_t> digits(vars.size(), 0);
    for (;;)
    {
        for (size_t i = 0; i < vars.size(); ++i)
            env.values[vars[i]] = U256{digits[i]};
        if (std::all_of(preds.begin(), preds.end(), [&](const SymRef& p) { return !eval(p, env).is_zero(); }))
        {
            SolverResult r;
            r.status = SolverResult::Status::Sat;
            r.model = env.values;
            return r;
        }
        // The first variable is the most significant digit, so it ends up smallest.
        size_t i = vars.size();
        while (i > 0)
        {
            --i;
            if (++digits[i] < (uint64_t{1} << widths.at(vars[i])))
                break;
            digits[i] = 0;
            if (i == 0)
                return unsat();
        }
    }
}

/// Keeps one unknown of the last predicate free and pins the rest of the component to
/// their values in env, trying each candidate in turn.
SolverResult solve_pinned(const std::vector<SymRef>& preds, const std::set<VarId>& members, const Assignment& env,
    const std::map<VarId, unsigned>& widths, const SolveOptions& opt)
{
    for (const auto& f : inputs_of(preds.back()))
    {
        std::map<VarId, U256> others;
        for (const auto& v : members)
            if (v != f)
                others[v] = env.get(v);
        auto r = solve_separately(pinned(preds, others, env), widths, opt);
        if (r.sat())
            return r;
    }
    return unknown("no solution with the other unknowns pinned");
}
}  // namespace

SolverResult solve(const std::vector<SymRef>& conjunction, const SolveOptions& options)
{
    std::vector<SymRef> preds;
    for (const auto& c : conjunction)
        for (auto& p : split_conjuncts(c))
            preds.push_back(std::move(p));

    std::map<VarId, unsigned> widths;
    std::set<VarId> lengths;
    for (const auto& p : preds)
        for (const auto& [v, w] : widths_of(p))
        {
            widths[v] = w;
            if (v.kind == VarKind::length)
                lengths.insert(v);
        }
    if (!lengths.empty() && !options.env)
        return unknown("length variables need concrete values");

    const Assignment empty;
    const Assignment& env = options.env ? *options.env : empty;
    std::map<VarId, U256> pins;
    for (const auto& v : lengths)
        pins[v] = env.get(v);
    auto base = pinned(preds, pins, env);

    // Variables linked through a shared predicate form one component.
    std::map<VarId, VarId> parent;
    const auto find = [&](VarId v) {
        while (parent.at(v) != v)
            v = parent.at(v);
        return v;
    };
    for (const auto& p : base)
    {
        const auto vs = inputs_of(p);
        if (vs.empty())
        {
            if (p->value.is_zero())
                return unsat();
            continue;
        }
        for (const auto& v : vs)
            parent.emplace(v, v);
        for (const auto& v : vs)
            parent[find(v)] = find(*vs.begin());
    }
    std::map<VarId, std::vector<SymRef>> groups;
    for (const auto& p : base)
        if (const auto vs = inputs_of(p); !vs.empty())
            groups[find(*vs.begin())].push_back(p);

    SolverResult result;
    result.status = SolverResult::Status::Sat;
    for (const auto& [root, ps] : groups)
    {
        std::set<VarId> members;
        for (const auto& p : ps)
            for (const auto& v : inputs_of(p))
                members.insert(v);
        SolverResult r;
        if (members.size() == 1)
            r = solve_one(ps, root, widths.at(root), options);
        else if (auto joint = solve_jointly(ps, members, widths, options))
            r = std::move(*joint);
        else if (!options.env)
            return unknown("several unknowns in one predicate and no concrete values to pin");
        else
            r = solve_pinned(ps, members, env, widths, options);
        if (!r.sat())
            return r;
        result.model.insert(r.model.begin(), r.model.end());
    }
    if (!result.sat())
        return result;

    Assignment check = env;
    for (const auto& [v, value] : result.model)
        check.values[v] = value;
    for (const auto& p : preds)
        if (eval(p, check).is_zero())
            throw std::logic_error("solver model violates " + render(p));
    return result;
}

}  // namespace sctest::concolic
