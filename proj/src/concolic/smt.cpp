// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/concolic/smt.hpp>

#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace sctest::concolic
{
namespace
{
std::string bv(const U256& v)
{
    return "#x" + to_hex(BytesView{v.to_be().data(), 32}, false);
}

std::string var_symbol(const VarId& v)
{
    std::string s = "in" + std::to_string(v.param);
    if (v.kind == VarKind::element)
        s += "_" + std::to_string(v.index);
    else if (v.kind == VarKind::length)
        s += "_len";
    return s;
}

class Writer
{
public:
    std::string term(const SymRef& e)
    {
        switch (e->kind)
        {
        case SymExpr::Kind::Const:
            return bv(e->value);
        case SymExpr::Kind::Input:
            vars_.emplace(e->var, e->bits);
            return var_symbol(e->var);
        case SymExpr::Kind::Keccak:
        case SymExpr::Kind::Sload:
            return opaque(e);
        case SymExpr::Kind::Unop:
        {
            const auto a = term(e->args[0]);
            switch (e->op)
            {
            case SymOp::NOT:
                return "(bvnot " + a + ")";
            case SymOp::NEG:
                return "(bvneg " + a + ")";
            default:
                return "(ite (= " + a + " " + bv(U256{}) + ") " + bv(U256{1}) + " " + bv(U256{}) + ")";
            }
        }
        case SymExpr::Kind::Binop:
            break;
        }
        if (e->op == SymOp::EXP && !is_const(e->args[1]))
            return opaque(e);
        const auto a = term(e->args[0]);
        const auto b = term(e->args[1]);
        const auto zero = bv(U256{});
        const auto flag = [&](const std::string& cond) {
            return "(ite " + cond + " " + bv(U256{1}) + " " + zero + ")";
        };
        switch (e->op)
        {
        case SymOp::ADD:
            return "(bvadd " + a + " " + b + ")";
        case SymOp::SUB:
            return "(bvsub " + a + " " + b + ")";
        case SymOp::MUL:
            return "(bvmul " + a + " " + b + ")";
        case SymOp::DIV:
            return "(ite (= " + b + " " + zero + ") " + zero + " (bvudiv " + a + " " + b + "))";
        case SymOp::MOD:
            return "(ite (= " + b + " " + zero + ") " + zero + " (bvurem " + a + " " + b + "))";
        case SymOp::EXP:
        {
            // Constant exponent: repeated multiplication, capped to keep scripts small.
            const U256& k = e->args[1]->value;
            if (!k.fits_u64() || k.low64() > 16)
                return opaque(e);
            std::string r = bv(U256{1});
            for (uint64_t i = 0; i < k.low64(); ++i)
                r = i == 0 ? a : "(bvmul " + r + " " + a + ")";
            return r;
        }
        case SymOp::LT:
            return flag("(bvult " + a + " " + b + ")");
        case SymOp::GT:
            return flag("(bvugt " + a + " " + b + ")");
        case SymOp::EQ:
            return flag("(= " + a + " " + b + ")");
        case SymOp::AND:
            return "(bvand " + a + " " + b + ")";
        case SymOp::OR:
            return "(bvor " + a + " " + b + ")";
        case SymOp::XOR:
            return "(bvxor " + a + " " + b + ")";
        case SymOp::SHL:
            return "(bvshl " + b + " " + a + ")";
        case SymOp::SHR:
            return "(bvlshr " + b + " " + a + ")";
        default:
            throw std::logic_error(std::string{"no SMT form for "} + to_string(e->op));
        }
    }

    std::string declarations() const
    {
        std::ostringstream out;
        for (const auto& [v, bits] : vars_)
        {
            out << "(declare-const " << var_symbol(v) << " (_ BitVec 256))\n";
            if (bits < 256)
                out << "(assert (bvule " << var_symbol(v) << " " << bv(low_mask(bits)) << "))\n";
        }
        for (size_t i = 0; i < opaque_.size(); ++i)
            out << "(declare-const h" << i << " (_ BitVec 256)) ; " << render(opaque_[i]) << "\n";
        return out.str();
    }

private:
    std::string opaque(const SymRef& e)
    {
        for (size_t i = 0; i < opaque_.size(); ++i)
            if (same_expr(opaque_[i], e))
                return "h" + std::to_string(i);
        opaque_.push_back(e);
        return "h" + std::to_string(opaque_.size() - 1);
    }

    std::map<VarId, unsigned> vars_;
    std::vector<SymRef> opaque_;
};
}  // namespace

std::string to_smtlib(const std::vector<SymRef>& conjunction)
{
    Writer w;
    std::ostringstream body;
    for (const auto& p : conjunction)
        body << "(assert (distinct " << w.term(p) << " " << bv(U256{}) << "))\n";
    std::ostringstream out;
    out << "(set-logic QF_BV)\n" << w.declarations() << body.str() << "(check-sat)\n(get-model)\n";
    return out.str();
}

std::filesystem::path emit_smtlib(const std::filesystem::path& dir, const std::vector<SymRef>& conjunction)
{
    const auto text = to_smtlib(conjunction);
    const auto digest = bytecode::keccak256(std::string_view{text});
    std::filesystem::create_directories(dir);
    const auto path = dir / (to_hex(BytesView{digest.data(), 8}, false) + ".smt2");
    std::ofstream out{path, std::ios::binary};
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
    return path;
}

}  // namespace sctest::concolic
