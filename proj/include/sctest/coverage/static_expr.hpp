// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/bundle.hpp>

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

namespace sctest::coverage
{
/// Expression recovered by abstract interpretation of the CFG, without running code.
struct StaticNode;
using StaticExpr = std::shared_ptr<const StaticNode>;

struct StaticNode
{
    enum class Kind : uint8_t
    {
        Const,
        Opaque,         ///< stack slot `slot` (from the top) at entry of `block`, not resolved
        CallData,       ///< CALLDATALOAD(args[0])
        CallDataSize,
        CallDataSlice,  ///< calldata[args[0] : args[0] + args[1]] copied to memory
        Sload,          ///< SLOAD(args[0])
        Sha3,           ///< keccak over the concatenation of args
        Env,            ///< CALLER, TIMESTAMP, ... (`op` says which)
        Unop,
        Binop,
        Unknown,
    };
    Kind kind = Kind::Unknown;
    bytecode::Op op = bytecode::Op::STOP;
    U256 value;
    uint32_t block = 0;
    uint32_t slot = 0;
    std::vector<StaticExpr> args;
};

bool same_expr(const StaticExpr& a, const StaticExpr& b) noexcept;

/// Walks up the CFG to recover the operands of conditional jumps.
class StaticAnalyzer
{
public:
    explicit StaticAnalyzer(const bytecode::ContractBundle& contract);

    /// Condition operand of the JUMPI ending `block` (nonzero means the jump is taken).
    StaticExpr jumpi_condition(uint32_t block);

    /// Predicate that must hold to take the given successor of a JUMPI block.
    StaticExpr branch_predicate(uint32_t block, bool taken);

    /// Source-like rendering; parameter references use the names of `fn` when given.
    std::string render(const StaticExpr& e, const bytecode::FunctionSig* fn) const;

    /// Parameter indices of `fn` that the expression reads.
    std::set<int> params_read(const StaticExpr& e, const bytecode::FunctionSig* fn) const;

    /// True when the expression reads CALLDATASIZE or the length word of a dynamic parameter.
    bool reads_length(const StaticExpr& e) const;

private:
    std::vector<StaticExpr> simulate(uint32_t block, const std::vector<StaticExpr>& entry,
        StaticExpr* jumpi_cond) const;
    void solve_entries();

    const bytecode::ContractBundle& contract_;
    std::vector<std::vector<StaticExpr>> entries_;  ///< top-relative entry stack per block
};

bool contains_kind(const StaticExpr& e, StaticNode::Kind kind);
/// MUL or EXP combining two non-constant operands.
bool has_nonlinear(const StaticExpr& e);

}  // namespace sctest::coverage
