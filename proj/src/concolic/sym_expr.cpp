// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/bytecode/opcodes.hpp>
#include <sctest/concolic/sym_expr.hpp>

#include <algorithm>
#include <unordered_map>

namespace sctest::concolic
{
using bytecode::Op;

const char* to_string(SymOp op) noexcept
{
    switch (op)
    {
    case SymOp::ADD: return "+";
    case SymOp::SUB: return "-";
    case SymOp::MUL: return "*";
    case SymOp::DIV: return "/";
    case SymOp::MOD: return "%";
    case SymOp::EXP: return "**";
    case SymOp::LT: return "<";
    case SymOp::GT: return ">";
    case SymOp::EQ: return "==";
    case SymOp::AND: return "&";
    case SymOp::OR: return "|";
    case SymOp::XOR: return "^";
    case SymOp::SHL: return "<<";
    case SymOp::SHR: return ">>";
    case SymOp::NOT: return "~";
    case SymOp::ISZERO: return "!";
    case SymOp::NEG: return "-";
    }
    return "?";
}

bool is_unary(SymOp op) noexcept
{
    return op == SymOp::NOT || op == SymOp::ISZERO || op == SymOp::NEG;
}

bool is_boolean(SymOp op) noexcept
{
    return op == SymOp::LT || op == SymOp::GT || op == SymOp::EQ || op == SymOp::ISZERO;
}

std::string to_string(const VarId& v)
{
    const std::string base = "in" + std::to_string(v.param);
    switch (v.kind)
    {
    case VarKind::word:
        return base;
    case VarKind::element:
        return base + "[" + std::to_string(v.index) + "]";
    case VarKind::length:
        return base + ".length";
    }
    return base;
}

namespace
{
Op evm_op(SymOp op)
{
    switch (op)
    {
    case SymOp::ADD: return Op::ADD;
    case SymOp::SUB: return Op::SUB;
    case SymOp::MUL: return Op::MUL;
    case SymOp::DIV: return Op::DIV;
    case SymOp::MOD: return Op::MOD;
    case SymOp::EXP: return Op::EXP;
    case SymOp::LT: return Op::LT;
    case SymOp::GT: return Op::GT;
    case SymOp::EQ: return Op::EQ;
    case SymOp::AND: return Op::AND;
    case SymOp::OR: return Op::OR;
    case SymOp::XOR: return Op::XOR;
    case SymOp::SHL: return Op::SHL;
    case SymOp::SHR: return Op::SHR;
    case SymOp::NOT: return Op::NOT;
    case SymOp::ISZERO: return Op::ISZERO;
    case SymOp::NEG: return Op::SUB;
    }
    return Op::STOP;
}

U256 apply(SymOp op, const U256& a, const U256& b)
{
    return bytecode::apply_binop(evm_op(op), a, b);
}

U256 apply(SymOp op, const U256& a)
{
    if (op == SymOp::NEG)
        return U256{} - a;
    return bytecode::apply_unop(evm_op(op), a);
}

unsigned const_width(const U256& v)
{
    return v.bit_length();
}

bool is_value(const SymRef& e, const U256& v)
{
    return e->kind == SymExpr::Kind::Const && e->value == v;
}

SymRef make(SymExpr e)
{
    return std::make_shared<const SymExpr>(std::move(e));
}

unsigned binop_bound(SymOp op, const SymExpr& a, const SymExpr& b)
{
    auto cap = [](unsigned v) { return std::min(v, 256u); };
    switch (op)
    {
    case SymOp::LT:
    case SymOp::GT:
    case SymOp::EQ:
        return 1;
    case SymOp::AND:
        return std::min(a.ub, b.ub);
    case SymOp::OR:
    case SymOp::XOR:
        return std::max(a.ub, b.ub);
    case SymOp::ADD:
        return cap(std::max(a.ub, b.ub) + 1);
    case SymOp::MUL:
        return cap(a.ub + b.ub);
    case SymOp::DIV:
        return a.ub;
    case SymOp::MOD:
        return std::min(a.ub, b.ub);
    case SymOp::SHL:
        if (a.kind == SymExpr::Kind::Const && a.value < U256{256})
            return cap(b.ub + static_cast<unsigned>(a.value.low64()));
        return 256;
    case SymOp::SHR:
        if (a.kind == SymExpr::Kind::Const)
            return a.value < U256{256} ? b.ub - std::min(b.ub, static_cast<unsigned>(a.value.low64())) : 0;
        return b.ub;
    default:
        return 256;
    }
}
}  // namespace

SymRef constant(const U256& v)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Const;
    e.value = v;
    e.ub = const_width(v);
    return make(std::move(e));
}

SymRef input(const VarId& v, unsigned bits)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Input;
    e.var = v;
    e.bits = bits;
    e.ub = bits;
    return make(std::move(e));
}

SymRef unop(SymOp op, SymRef a)
{
    if (a->kind == SymExpr::Kind::Const)
        return constant(apply(op, a->value));
    if (a->kind == SymExpr::Kind::Unop && a->op == op && op != SymOp::ISZERO)
        return a->args[0];  // ~~x and --x
    if (op == SymOp::ISZERO && a->kind == SymExpr::Kind::Unop && a->op == SymOp::ISZERO &&
        a->args[0]->ub <= 1)
        return a->args[0];  // !!b for a 0/1 value b
    SymExpr e;
    e.kind = SymExpr::Kind::Unop;
    e.op = op;
    e.ub = op == SymOp::ISZERO ? 1 : 256;
    e.args = {std::move(a)};
    return make(std::move(e));
}

SymRef binop(SymOp op, SymRef a, SymRef b)
{
    const bool ca = a->kind == SymExpr::Kind::Const;
    const bool cb = b->kind == SymExpr::Kind::Const;
    if (ca && cb)
        return constant(apply(op, a->value, b->value));
    switch (op)
    {
    case SymOp::ADD:
        if (is_value(a, 0))
            return b;
        if (is_value(b, 0))
            return a;
        break;
    case SymOp::SUB:
        if (is_value(b, 0))
            return a;
        break;
    case SymOp::MUL:
        if (is_value(a, 0) || is_value(b, 0))
            return constant(0);
        if (is_value(a, 1))
            return b;
        if (is_value(b, 1))
            return a;
        break;
    case SymOp::DIV:
        if (is_value(b, 1))
            return a;
        break;
    case SymOp::AND:
        if (is_value(a, 0) || is_value(b, 0))
            return constant(0);
        if (ca && (a->value & low_mask(b->ub)) == low_mask(b->ub))
            return b;
        if (cb && (b->value & low_mask(a->ub)) == low_mask(a->ub))
            return a;
        break;
    case SymOp::OR:
    case SymOp::XOR:
        if (is_value(a, 0))
            return b;
        if (is_value(b, 0))
            return a;
        break;
    case SymOp::SHL:
    case SymOp::SHR:
        if (is_value(a, 0))
            return b;
        if (is_value(b, 0))
            return constant(0);
        if (ca && (a->value >= U256{256} || (op == SymOp::SHR && b->ub <= a->value.low64())))
            return constant(0);
        break;
    default:
        break;
    }
    SymExpr e;
    e.kind = SymExpr::Kind::Binop;
    e.op = op;
    e.ub = binop_bound(op, *a, *b);
    e.args = {std::move(a), std::move(b)};
    return make(std::move(e));
}

SymRef keccak(std::vector<SymRef> words, uint32_t size)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Keccak;
    e.size = size;
    e.args = std::move(words);
    return make(std::move(e));
}

SymRef sload(SymRef slot)
{
    SymExpr e;
    e.kind = SymExpr::Kind::Sload;
    e.args = {std::move(slot)};
    return make(std::move(e));
}

U256 Assignment::get(const VarId& v) const
{
    const auto it = values.find(v);
    return it == values.end() ? U256{} : it->second;
}

namespace
{
using Memo = std::unordered_map<const SymExpr*, U256>;

U256 eval_memo(const SymExpr& e, const Assignment& env, Memo& memo);

std::vector<uint8_t> buffer_memo(const SymExpr& k, const Assignment& env, Memo& memo)
{
    std::vector<uint8_t> buf;
    buf.reserve(k.args.size() * 32);
    for (const auto& w : k.args)
    {
        const auto be = eval_memo(*w, env, memo).to_be();
        buf.insert(buf.end(), be.begin(), be.end());
    }
    buf.resize(k.size, 0);
    return buf;
}

U256 eval_memo(const SymExpr& e, const Assignment& env, Memo& memo)
{
    switch (e.kind)
    {
    case SymExpr::Kind::Const:
        return e.value;
    case SymExpr::Kind::Input:
        return env.get(e.var);
    default:
        break;
    }
    if (const auto it = memo.find(&e); it != memo.end())
        return it->second;
    U256 v;
    switch (e.kind)
    {
    case SymExpr::Kind::Unop:
        v = apply(e.op, eval_memo(*e.args[0], env, memo));
        break;
    case SymExpr::Kind::Binop:
        v = apply(e.op, eval_memo(*e.args[0], env, memo), eval_memo(*e.args[1], env, memo));
        break;
    case SymExpr::Kind::Keccak:
        v = bytecode::keccak256_word(buffer_memo(e, env, memo));
        break;
    case SymExpr::Kind::Sload:
    {
        const auto it = env.storage.find(eval_memo(*e.args[0], env, memo));
        v = it == env.storage.end() ? U256{} : it->second;
        break;
    }
    default:
        break;
    }
    memo.emplace(&e, v);
    return v;
}

template <typename F>
void visit(const SymRef& e, std::unordered_map<const SymExpr*, bool>& seen, const F& f)
{
    if (!seen.emplace(e.get(), true).second)
        return;
    f(*e);
    for (const auto& a : e->args)
        visit(a, seen, f);
}
}  // namespace

U256 eval(const SymExpr& e, const Assignment& env)
{
    Memo memo;
    return eval_memo(e, env, memo);
}

std::vector<uint8_t> keccak_buffer(const SymExpr& k, const Assignment& env)
{
    Memo memo;
    return buffer_memo(k, env, memo);
}

bool is_const(const SymRef& e) noexcept
{
    return e->kind == SymExpr::Kind::Const;
}

std::set<VarId> inputs_of(const SymRef& e)
{
    std::set<VarId> out;
    std::unordered_map<const SymExpr*, bool> seen;
    visit(e, seen, [&](const SymExpr& x) {
        if (x.kind == SymExpr::Kind::Input)
            out.insert(x.var);
    });
    return out;
}

std::map<VarId, unsigned> widths_of(const SymRef& e)
{
    std::map<VarId, unsigned> out;
    std::unordered_map<const SymExpr*, bool> seen;
    visit(e, seen, [&](const SymExpr& x) {
        if (x.kind == SymExpr::Kind::Input)
            out[x.var] = x.bits;
    });
    return out;
}

bool contains_kind(const SymRef& e, SymExpr::Kind kind)
{
    bool found = false;
    std::unordered_map<const SymExpr*, bool> seen;
    visit(e, seen, [&](const SymExpr& x) { found = found || x.kind == kind; });
    return found;
}

bool same_expr(const SymRef& a, const SymRef& b)
{
    if (a == b)
        return true;
    if (a->kind != b->kind || a->args.size() != b->args.size())
        return false;
    switch (a->kind)
    {
    case SymExpr::Kind::Const:
        return a->value == b->value;
    case SymExpr::Kind::Input:
        return a->var == b->var;
    case SymExpr::Kind::Unop:
    case SymExpr::Kind::Binop:
        if (a->op != b->op)
            return false;
        break;
    case SymExpr::Kind::Keccak:
        if (a->size != b->size)
            return false;
        break;
    case SymExpr::Kind::Sload:
        break;
    }
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!same_expr(a->args[i], b->args[i]))
            return false;
    return true;
}

unsigned width_bound(const SymRef& e)
{
    return e->ub;
}

namespace
{
SymRef rebuild(const SymExpr& e, std::vector<SymRef> args)
{
    switch (e.kind)
    {
    case SymExpr::Kind::Unop:
        return unop(e.op, std::move(args[0]));
    case SymExpr::Kind::Binop:
        return binop(e.op, std::move(args[0]), std::move(args[1]));
    case SymExpr::Kind::Keccak:
        return keccak(std::move(args), e.size);
    case SymExpr::Kind::Sload:
        return sload(std::move(args[0]));
    default:
        return nullptr;
    }
}

SymRef substitute_memo(const SymRef& e, const std::function<SymRef(const SymExpr&)>& leaf,
    std::unordered_map<const SymExpr*, SymRef>& memo)
{
    if (e->kind == SymExpr::Kind::Const)
        return e;
    if (e->kind == SymExpr::Kind::Input)
    {
        auto r = leaf(*e);
        return r ? r : e;
    }
    if (const auto it = memo.find(e.get()); it != memo.end())
        return it->second;
    std::vector<SymRef> args;
    bool changed = false;
    for (const auto& a : e->args)
    {
        args.push_back(substitute_memo(a, leaf, memo));
        changed = changed || args.back() != a;
    }
    auto r = changed ? rebuild(*e, std::move(args)) : e;
    memo.emplace(e.get(), r);
    return r;
}
}  // namespace

SymRef substitute(const SymRef& e, const std::function<SymRef(const SymExpr&)>& leaf)
{
    std::unordered_map<const SymExpr*, SymRef> memo;
    return substitute_memo(e, leaf, memo);
}

SymRef pin(const SymRef& e, const std::map<VarId, U256>& values)
{
    return substitute(e, [&](const SymExpr& x) -> SymRef {
        const auto it = values.find(x.var);
        return it == values.end() ? nullptr : constant(it->second);
    });
}

namespace
{
/// Bottom-up rebuild; builders fold constant operands and Sload reads env.storage.
SymRef fold_memo(const SymRef& e, const Assignment& env, std::unordered_map<const SymExpr*, SymRef>& memo)
{
    if (e->kind == SymExpr::Kind::Const || e->kind == SymExpr::Kind::Input)
        return e;
    if (const auto it = memo.find(e.get()); it != memo.end())
        return it->second;
    std::vector<SymRef> args;
    bool all_const = true;
    bool changed = false;
    for (const auto& a : e->args)
    {
        args.push_back(fold_memo(a, env, memo));
        all_const = all_const && is_const(args.back());
        changed = changed || args.back() != a;
    }
    SymRef r;
    if (all_const && e->kind == SymExpr::Kind::Sload)
    {
        const auto it = env.storage.find(args[0]->value);
        r = constant(it == env.storage.end() ? U256{} : it->second);
    }
    else if (all_const && e->kind == SymExpr::Kind::Keccak)
        r = constant(eval(*e, env));
    else
        r = changed ? rebuild(*e, std::move(args)) : e;
    memo.emplace(e.get(), r);
    return r;
}

int precedence(const SymExpr& e)
{
    if (e.kind != SymExpr::Kind::Binop)
        return 100;
    switch (e.op)
    {
    case SymOp::EXP: return 9;
    case SymOp::MUL:
    case SymOp::DIV:
    case SymOp::MOD: return 8;
    case SymOp::ADD:
    case SymOp::SUB: return 7;
    case SymOp::SHL:
    case SymOp::SHR: return 6;
    case SymOp::LT:
    case SymOp::GT: return 5;
    case SymOp::EQ: return 4;
    case SymOp::AND: return 3;
    case SymOp::XOR: return 2;
    default: return 1;
    }
}

std::string render_at(const SymRef& e, int outer)
{
    std::string s;
    switch (e->kind)
    {
    case SymExpr::Kind::Const:
        return e->value < U256{1u << 16} ? e->value.to_dec() : e->value.to_hex();
    case SymExpr::Kind::Input:
        return to_string(e->var);
    case SymExpr::Kind::Unop:
        return std::string{to_string(e->op)} + render_at(e->args[0], 100);
    case SymExpr::Kind::Keccak:
    {
        s = "keccak256(";
        for (size_t i = 0; i < e->args.size(); ++i)
            s += (i ? ", " : "") + render_at(e->args[i], 0);
        return s + "; " + std::to_string(e->size) + ")";
    }
    case SymExpr::Kind::Sload:
        return "sload(" + render_at(e->args[0], 0) + ")";
    case SymExpr::Kind::Binop:
        break;
    }
    const int p = precedence(*e);
    // Shifts are stored shift-first; show them value-first.
    const bool shift = e->op == SymOp::SHL || e->op == SymOp::SHR;
    const auto& lhs = shift ? e->args[1] : e->args[0];
    const auto& rhs = shift ? e->args[0] : e->args[1];
    s = render_at(lhs, p) + " " + to_string(e->op) + " " + render_at(rhs, p + 1);
    return p < outer ? "(" + s + ")" : s;
}
}  // namespace

SymRef fold(const SymRef& e, const Assignment& env)
{
    std::unordered_map<const SymExpr*, SymRef> memo;
    return fold_memo(e, env, memo);
}

std::string render(const SymRef& e)
{
    return render_at(e, 0);
}

}  // namespace sctest::concolic
