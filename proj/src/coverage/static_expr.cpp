// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/opcodes.hpp>
#include <sctest/coverage/static_expr.hpp>

#include <algorithm>
#include <cstdio>

namespace sctest::coverage
{
using bytecode::Op;
using Kind = StaticNode::Kind;

namespace
{
constexpr size_t tracked_slots = 32;
constexpr int max_passes = 64;

StaticExpr make(Kind k, std::vector<StaticExpr> args = {}, Op op = Op::STOP)
{
    auto n = std::make_shared<StaticNode>();
    n->kind = k;
    n->op = op;
    n->args = std::move(args);
    return n;
}

StaticExpr constant(const U256& v)
{
    auto n = std::make_shared<StaticNode>();
    n->kind = Kind::Const;
    n->value = v;
    return n;
}

StaticExpr opaque(uint32_t block, uint32_t slot)
{
    auto n = std::make_shared<StaticNode>();
    n->kind = Kind::Opaque;
    n->block = block;
    n->slot = slot;
    return n;
}

StaticExpr unknown()
{
    static const StaticExpr u = make(Kind::Unknown);
    return u;
}

bool is_const(const StaticExpr& e)
{
    return e->kind == Kind::Const;
}

bool is_boolean(const StaticExpr& e)
{
    if (e->kind == Kind::Binop)
        return e->op == Op::LT || e->op == Op::GT || e->op == Op::EQ;
    return e->kind == Kind::Unop && e->op == Op::ISZERO;
}

StaticExpr binop(Op op, StaticExpr a, StaticExpr b)
{
    if (is_const(a) && is_const(b))
        return constant(bytecode::apply_binop(op, a->value, b->value));
    return make(Kind::Binop, {std::move(a), std::move(b)}, op);
}

StaticExpr unop(Op op, StaticExpr a)
{
    if (is_const(a))
        return constant(bytecode::apply_unop(op, a->value));
    // ISZERO(ISZERO(p)) is p itself when p is already 0/1.
    if (op == Op::ISZERO && a->kind == Kind::Unop && a->op == Op::ISZERO && is_boolean(a->args[0]))
        return a->args[0];
    return make(Kind::Unop, {std::move(a)}, op);
}

// Splits nested ADDs into a constant part and the remaining terms.
void flatten_sum(const StaticExpr& e, U256& k, std::vector<StaticExpr>& terms)
{
    if (e->kind == Kind::Const)
        k = k + e->value;
    else if (e->kind == Kind::Binop && e->op == Op::ADD)
    {
        flatten_sum(e->args[0], k, terms);
        flatten_sum(e->args[1], k, terms);
    }
    else
        terms.push_back(e);
}

// Index of the parameter whose head word sits at a constant calldata offset.
std::optional<size_t> head_param(const StaticExpr& e)
{
    if (e->kind != Kind::CallData || !is_const(e->args[0]))
        return std::nullopt;
    const U256& off = e->args[0]->value;
    if (!off.fits_u64() || off.low64() < 4 || (off.low64() - 4) % 32 != 0)
        return std::nullopt;
    return (off.low64() - 4) / 32;
}

// Element index of `t` when it has the form 32*x (or x<<5).
StaticExpr scaled_index(const StaticExpr& t)
{
    if (t->kind != Kind::Binop)
        return nullptr;
    const auto& a = t->args[0];
    const auto& b = t->args[1];
    if (t->op == Op::MUL)
    {
        if (is_const(a) && a->value == U256{32})
            return b;
        if (is_const(b) && b->value == U256{32})
            return a;
    }
    if (t->op == Op::SHL && is_const(a) && a->value == U256{5})
        return b;
    return nullptr;
}

/// How a CALLDATALOAD offset relates to the ABI layout.
struct CalldataRef
{
    enum class Shape
    {
        none,
        head,     ///< static parameter value or dynamic offset word
        length,   ///< length word of a dynamic parameter
        element,  ///< element of a dynamic parameter, index in `index` or `const_index`
    };
    Shape shape = Shape::none;
    size_t param = 0;
    StaticExpr index;
    uint64_t const_index = 0;
};

CalldataRef classify(const StaticExpr& offset)
{
    CalldataRef r;
    U256 k;
    std::vector<StaticExpr> terms;
    flatten_sum(offset, k, terms);
    if (terms.empty())
    {
        if (k.fits_u64() && k.low64() >= 4 && (k.low64() - 4) % 32 == 0)
        {
            r.shape = CalldataRef::Shape::head;
            r.param = (k.low64() - 4) / 32;
        }
        return r;
    }
    // Exactly one term must be a dynamic parameter's offset word.
    std::optional<size_t> param;
    std::vector<StaticExpr> rest;
    for (const auto& t : terms)
    {
        if (const auto p = head_param(t); p && !param)
            param = p;
        else
            rest.push_back(t);
    }
    if (!param || !k.fits_u64())
        return r;
    r.param = *param;
    const uint64_t kk = k.low64();
    if (rest.empty() && kk == 4)
        r.shape = CalldataRef::Shape::length;
    else if (rest.empty() && kk >= 36 && (kk - 36) % 32 == 0)
    {
        r.shape = CalldataRef::Shape::element;
        r.const_index = (kk - 36) / 32;
    }
    else if (rest.size() == 1 && kk == 36)
    {
        if (auto idx = scaled_index(rest[0]))
        {
            r.shape = CalldataRef::Shape::element;
            r.index = std::move(idx);
        }
    }
    return r;
}

int precedence(Op op)
{
    switch (op)
    {
    case Op::EXP:
        return 7;
    case Op::MUL:
    case Op::DIV:
    case Op::MOD:
        return 6;
    case Op::ADD:
    case Op::SUB:
        return 5;
    case Op::SHL:
    case Op::SHR:
        return 4;
    case Op::AND:
        return 3;
    case Op::XOR:
        return 2;
    case Op::OR:
        return 1;
    default:
        return 0;  // comparisons
    }
}

const char* infix(Op op)
{
    switch (op)
    {
    case Op::ADD:
        return " + ";
    case Op::SUB:
        return " - ";
    case Op::MUL:
        return "*";
    case Op::DIV:
        return " / ";
    case Op::MOD:
        return " % ";
    case Op::EXP:
        return "**";
    case Op::LT:
        return " < ";
    case Op::GT:
        return " > ";
    case Op::EQ:
        return " == ";
    case Op::AND:
        return " & ";
    case Op::OR:
        return " | ";
    case Op::XOR:
        return " ^ ";
    case Op::SHL:
        return " << ";
    case Op::SHR:
        return " >> ";
    default:
        return " ? ";
    }
}

bool all_ones_mask(const U256& v, unsigned& bits)
{
    bits = v.bit_length();
    return bits > 0 && v == low_mask(bits);
}
}  // namespace

bool same_expr(const StaticExpr& a, const StaticExpr& b) noexcept
{
    if (a == b)
        return true;
    if (!a || !b || a->kind != b->kind || a->op != b->op || a->value != b->value ||
        a->block != b->block || a->slot != b->slot || a->args.size() != b->args.size())
        return false;
    for (size_t i = 0; i < a->args.size(); ++i)
        if (!same_expr(a->args[i], b->args[i]))
            return false;
    return true;
}

bool contains_kind(const StaticExpr& e, Kind kind)
{
    if (e->kind == kind)
        return true;
    return std::any_of(e->args.begin(), e->args.end(), [&](const auto& a) { return contains_kind(a, kind); });
}

bool has_nonlinear(const StaticExpr& e)
{
    if (e->kind == Kind::Binop && (e->op == Op::MUL || e->op == Op::EXP) && !is_const(e->args[0]) &&
        !is_const(e->args[1]))
        return true;
    return std::any_of(e->args.begin(), e->args.end(), [](const auto& a) { return has_nonlinear(a); });
}

StaticAnalyzer::StaticAnalyzer(const bytecode::ContractBundle& contract) : contract_{contract} {}

std::vector<StaticExpr> StaticAnalyzer::simulate(
    uint32_t block, const std::vector<StaticExpr>& entry, StaticExpr* jumpi_cond) const
{
    const auto& bb = contract_.cfg->blocks[block];
    const auto& code = contract_.program->instructions();
    std::vector<StaticExpr> st(entry.rbegin(), entry.rend());  // bottom first
    while (!st.empty() && st.front()->kind == Kind::Unknown)
        st.erase(st.begin());
    std::map<uint64_t, StaticExpr> mem_words;
    std::map<uint64_t, std::pair<StaticExpr, StaticExpr>> mem_slices;  // dest -> (offset, size)

    auto pop = [&]() -> StaticExpr {
        if (st.empty())
            return unknown();
        auto v = st.back();
        st.pop_back();
        return v;
    };
    auto push = [&](StaticExpr e) { st.push_back(std::move(e)); };

    for (uint32_t i = bb.first; i <= bb.last; ++i)
    {
        const auto& ins = code[i];
        const Op op = ins.op;
        const auto b = static_cast<uint8_t>(ins.byte);
        if (bytecode::is_push(b))
        {
            push(constant(ins.push_value()));
            continue;
        }
        if (b >= 0x80 && b <= 0x8f)
        {
            const size_t n = b - 0x7fu;
            push(n <= st.size() ? st[st.size() - n] : unknown());
            continue;
        }
        if (b >= 0x90 && b <= 0x9f)
        {
            const size_t n = b - 0x8fu;
            if (n < st.size())
                std::swap(st.back(), st[st.size() - 1 - n]);
            continue;
        }
        if (bytecode::is_binary_value_op(op))
        {
            auto a = pop();
            auto c = pop();
            push(binop(op, std::move(a), std::move(c)));
            continue;
        }
        switch (op)
        {
        case Op::ISZERO:
        case Op::NOT:
            push(unop(op, pop()));
            break;
        case Op::POP:
            pop();
            break;
        case Op::CALLDATALOAD:
            push(make(Kind::CallData, {pop()}));
            break;
        case Op::CALLDATASIZE:
            push(make(Kind::CallDataSize));
            break;
        case Op::CALLDATACOPY:
        {
            auto dest = pop(), off = pop(), size = pop();
            if (is_const(dest) && dest->value.fits_u64())
                mem_slices[dest->value.low64()] = {off, size};
            break;
        }
        case Op::MSTORE:
        {
            auto off = pop(), val = pop();
            if (is_const(off) && off->value.fits_u64())
                mem_words[off->value.low64()] = val;
            else
                mem_words.clear();
            break;
        }
        case Op::MSTORE8:
            pop();
            pop();
            mem_words.clear();
            break;
        case Op::MLOAD:
        {
            auto off = pop();
            StaticExpr v = unknown();
            if (is_const(off) && off->value.fits_u64())
                if (auto it = mem_words.find(off->value.low64()); it != mem_words.end())
                    v = it->second;
            push(v);
            break;
        }
        case Op::SHA3:
        {
            auto off = pop(), size = pop();
            std::vector<StaticExpr> parts;
            if (is_const(off) && off->value.fits_u64())
            {
                const uint64_t o = off->value.low64();
                if (auto it = mem_slices.find(o); it != mem_slices.end())
                    parts.push_back(make(Kind::CallDataSlice, {it->second.first, it->second.second}));
                else if (is_const(size) && size->value.fits_u64() && size->value.low64() % 32 == 0)
                {
                    for (uint64_t w = 0; w < size->value.low64(); w += 32)
                    {
                        auto it2 = mem_words.find(o + w);
                        parts.push_back(it2 == mem_words.end() ? unknown() : it2->second);
                    }
                }
            }
            if (parts.empty())
                parts.push_back(unknown());
            push(make(Kind::Sha3, std::move(parts)));
            break;
        }
        case Op::SLOAD:
            push(make(Kind::Sload, {pop()}));
            break;
        case Op::CALLER:
        case Op::CALLVALUE:
        case Op::ADDRESS:
        case Op::TIMESTAMP:
        case Op::NUMBER:
        case Op::GAS:
        case Op::PC:
            push(make(Kind::Env, {}, op));
            break;
        case Op::BALANCE:
            push(make(Kind::Env, {pop()}, op));
            break;
        case Op::JUMP:
            pop();
            break;
        case Op::JUMPI:
        {
            pop();
            auto cond = pop();
            if (jumpi_cond)
                *jumpi_cond = cond;
            break;
        }
        case Op::JUMPDEST:
            break;
        default:
        {
            const auto& info = bytecode::op_info(b);
            for (unsigned k = 0; k < info.inputs; ++k)
                pop();
            for (unsigned k = 0; k < info.outputs; ++k)
                push(unknown());
            if (op == Op::CALL || op == Op::DELEGATECALL || op == Op::STATICCALL)
                mem_words.clear();
        }
        }
    }
    std::vector<StaticExpr> out(st.rbegin(), st.rend());
    if (out.size() > tracked_slots)
        out.resize(tracked_slots);
    return out;
}

// Forward dataflow to a fixpoint: a slot keeps an expression while every predecessor
// agrees on it and otherwise becomes Opaque(block, slot).
void StaticAnalyzer::solve_entries()
{
    const auto& blocks = contract_.cfg->blocks;
    const size_t nb = blocks.size();
    entries_.assign(nb, {});
    std::vector<bool> ready(nb, false);
    if (nb == 0)
        return;
    entries_[0].assign(tracked_slots, unknown());
    ready[0] = true;
    for (size_t b = 1; b < nb; ++b)
        if (blocks[b].preds.empty())
        {
            for (uint32_t k = 0; k < tracked_slots; ++k)
                entries_[b].push_back(opaque(static_cast<uint32_t>(b), k));
            ready[b] = true;
        }

    for (int pass = 0; pass < max_passes; ++pass)
    {
        bool changed = false;
        for (uint32_t b = 0; b < nb; ++b)
        {
            if (b == 0 && blocks[b].preds.empty())
                continue;
            std::vector<std::vector<StaticExpr>> incoming;
            for (const uint32_t p : blocks[b].preds)
                if (ready[p])
                {
                    auto out = simulate(p, entries_[p], nullptr);
                    out.resize(tracked_slots, unknown());
                    incoming.push_back(std::move(out));
                }
            if (b == 0)
                incoming.push_back(std::vector<StaticExpr>(tracked_slots, unknown()));
            if (incoming.empty())
                continue;
            std::vector<StaticExpr> merged;
            for (uint32_t k = 0; k < tracked_slots; ++k)
            {
                const auto& first = incoming[0][k];
                const bool agree = std::all_of(incoming.begin(), incoming.end(),
                    [&](const auto& in) { return same_expr(in[k], first); });
                const bool was_opaque = ready[b] && entries_[b][k]->kind == Kind::Opaque &&
                                        entries_[b][k]->block == b;
                merged.push_back(agree && !was_opaque ? first : opaque(b, k));
            }
            if (!ready[b] || !std::equal(merged.begin(), merged.end(), entries_[b].begin(),
                                 [](const auto& x, const auto& y) { return same_expr(x, y); }))
            {
                entries_[b] = std::move(merged);
                ready[b] = true;
                changed = true;
            }
        }
        if (!changed)
            break;
    }
    for (uint32_t b = 0; b < nb; ++b)
        if (!ready[b])
            for (uint32_t k = 0; k < tracked_slots; ++k)
                entries_[b].push_back(opaque(b, k));
}

StaticExpr StaticAnalyzer::jumpi_condition(uint32_t block)
{
    StaticExpr cond = unknown();
    if (entries_.empty())
        solve_entries();
    simulate(block, entries_[block], &cond);
    return cond;
}

StaticExpr StaticAnalyzer::branch_predicate(uint32_t block, bool taken)
{
    auto cond = jumpi_condition(block);
    if (taken)
        return is_boolean(cond) ? cond : unop(Op::ISZERO, unop(Op::ISZERO, cond));
    return unop(Op::ISZERO, cond);
}

std::set<int> StaticAnalyzer::params_read(const StaticExpr& e, const bytecode::FunctionSig* fn) const
{
    std::set<int> out;
    if (e->kind == Kind::CallData && fn)
    {
        const auto ref = classify(e->args[0]);
        if (ref.shape != CalldataRef::Shape::none && ref.param < fn->params.size())
            out.insert(static_cast<int>(ref.param));
    }
    for (const auto& a : e->args)
    {
        const auto sub = params_read(a, fn);
        out.insert(sub.begin(), sub.end());
    }
    return out;
}

bool StaticAnalyzer::reads_length(const StaticExpr& e) const
{
    if (e->kind == Kind::CallDataSize)
        return true;
    if (e->kind == Kind::CallData && classify(e->args[0]).shape == CalldataRef::Shape::length)
        return true;
    return std::any_of(e->args.begin(), e->args.end(), [&](const auto& a) { return reads_length(a); });
}

std::string StaticAnalyzer::render(const StaticExpr& e, const bytecode::FunctionSig* fn) const
{
    auto param_name = [&](size_t p) -> std::string {
        if (fn && p < fn->param_names.size())
            return fn->param_names[p];
        return "arg" + std::to_string(p);
    };
    // Width of the value a calldata word can hold, when it is a typed parameter.
    auto param_bits = [&](const StaticExpr& x) -> unsigned {
        if (!fn || x->kind != Kind::CallData)
            return 256;
        const auto ref = classify(x->args[0]);
        if (ref.param >= fn->params.size())
            return 256;
        const auto& t = fn->params[ref.param];
        if (ref.shape == CalldataRef::Shape::head && !t.is_dynamic())
            return t.bits;
        if (ref.shape == CalldataRef::Shape::element && t.kind == bytecode::AbiType::Kind::uint_array)
            return t.bits;
        return 256;
    };

    auto strip_mask = [&](const StaticExpr& x) -> StaticExpr {
        if (x->kind != Kind::Binop || x->op != Op::AND)
            return x;
        unsigned bits = 0;
        const auto& l = x->args[0];
        const auto& r = x->args[1];
        if (is_const(r) && all_ones_mask(r->value, bits) && param_bits(l) <= bits)
            return l;
        if (is_const(l) && all_ones_mask(l->value, bits) && param_bits(r) <= bits)
            return r;
        return x;
    };

    switch (e->kind)
    {
    case Kind::Const:
        if (e->value.fits_u64() && e->value.low64() < (1ULL << 32))
            return std::to_string(e->value.low64());
        return e->value.to_hex();
    case Kind::Opaque:
    {
        const auto cyc = contract_.cfg->cycle_of(e->block);
        return cyc.empty() ? "s" + std::to_string(e->slot) : "i";
    }
    case Kind::CallData:
    {
        const auto ref = classify(e->args[0]);
        switch (ref.shape)
        {
        case CalldataRef::Shape::head:
            if (fn && ref.param < fn->params.size())
                return fn->params[ref.param].is_dynamic() ? "&" + param_name(ref.param)
                                                          : param_name(ref.param);
            break;
        case CalldataRef::Shape::length:
            return param_name(ref.param) + ".length";
        case CalldataRef::Shape::element:
            return param_name(ref.param) + "[" +
                   (ref.index ? render(ref.index, fn) : std::to_string(ref.const_index)) + "]";
        default:
            break;
        }
        return "calldata[" + render(e->args[0], fn) + "]";
    }
    case Kind::CallDataSize:
        return "msg.data.length";
    case Kind::CallDataSlice:
    {
        const auto& off = e->args[0];
        const auto& size = e->args[1];
        if (size->kind == Kind::Binop && size->op == Op::SUB && size->args[0]->kind == Kind::CallDataSize &&
            same_expr(size->args[1], off))
            return "msg.data[" + render(off, fn) + ":]";
        return "msg.data[" + render(off, fn) + ":" + render(off, fn) + " + " + render(size, fn) + "]";
    }
    case Kind::Sload:
        return "storage[" + render(e->args[0], fn) + "]";
    case Kind::Sha3:
    {
        std::string s = "keccak256(";
        for (size_t i = 0; i < e->args.size(); ++i)
            s += (i ? ", " : "") + render(e->args[i], fn);
        return s + ")";
    }
    case Kind::Env:
        switch (e->op)
        {
        case Op::CALLER:
            return "msg.sender";
        case Op::CALLVALUE:
            return "msg.value";
        case Op::ADDRESS:
            return "address(this)";
        case Op::TIMESTAMP:
            return "block.timestamp";
        case Op::NUMBER:
            return "block.number";
        case Op::GAS:
            return "gasleft()";
        case Op::BALANCE:
            return "balance(" + render(e->args[0], fn) + ")";
        default:
            return "pc";
        }
    case Kind::Unop:
    {
        const auto& a = e->args[0];
        if (e->op == Op::NOT)
            return "~(" + render(a, fn) + ")";
        if (a->kind == Kind::Binop && (a->op == Op::LT || a->op == Op::GT || a->op == Op::EQ))
        {
            const char* neg = a->op == Op::LT ? " >= " : a->op == Op::GT ? " <= " : " != ";
            return render(a->args[0], fn) + neg + render(a->args[1], fn);
        }
        if (a->kind == Kind::Unop && a->op == Op::ISZERO)
            return render(a->args[0], fn) + " != 0";
        return render(a, fn) + " == 0";
    }
    case Kind::Binop:
    {
        const auto& a = e->args[0];
        const auto& b = e->args[1];
        // Masks that only restate a parameter's width are left out.
        if (const auto inner = strip_mask(e); inner != e)
            return render(inner, fn);
        auto is_sig = [](const StaticExpr& x) {
            return x->kind == Kind::Binop && x->op == Op::SHR && is_const(x->args[0]) &&
                   x->args[0]->value == U256{224} && x->args[1]->kind == Kind::CallData &&
                   is_const(x->args[1]->args[0]) && x->args[1]->args[0]->value.is_zero();
        };
        if (e->op == Op::EQ && (is_sig(a) || is_sig(b)))
        {
            const auto& other = is_sig(a) ? b : a;
            if (is_const(other) && other->value.fits_u64())
            {
                char buf[16];
                std::snprintf(buf, sizeof buf, "0x%08llx", static_cast<unsigned long long>(other->value.low64()));
                return std::string{"msg.sig == "} + buf;
            }
        }
        // Selector extraction.
        if (e->op == Op::SHR && is_const(a) && a->value == U256{224} && b->kind == Kind::CallData &&
            is_const(b->args[0]) && b->args[0]->value.is_zero())
            return "msg.sig";
        const int prec = precedence(e->op);
        auto side = [&](const StaticExpr& x0, bool right) {
            const auto x = strip_mask(x0);
            std::string s = render(x, fn);
            if (x->kind == Kind::Binop)
            {
                const int p = precedence(x->op);
                const bool assoc = e->op == Op::ADD || e->op == Op::MUL || e->op == Op::AND ||
                                   e->op == Op::OR || e->op == Op::XOR;
                if (p < prec || (p == prec && right && !assoc) || (prec == 0 && p == 0))
                    s = "(" + s + ")";
            }
            return s;
        };
        if (e->op == Op::SHL || e->op == Op::SHR)
            return side(b, false) + infix(e->op) + side(a, true);
        return side(a, false) + infix(e->op) + side(b, true);
    }
    default:
        return "?";
    }
}

}  // namespace sctest::coverage
