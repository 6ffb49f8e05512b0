// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/coverage/coverage_map.hpp>

#include <string>
#include <vector>

namespace sctest::coverage
{
struct Features
{
    bool has_keccak = false;
    bool has_nonlinear_term = false;
    bool loop_guarded = false;
    bool storage_dependent = false;

    friend bool operator==(const Features&, const Features&) = default;
};

/// A conditional jump with one covered and one uncovered successor.
struct BranchConstraintInfo
{
    uint32_t branch_offset = 0;  ///< offset of the JUMPI
    std::string constraint_text;  ///< predicate that reaches the uncovered successor
    std::vector<std::string> inputs_involved;
    Features features;
    std::string function;  ///< owning function, empty for the dispatcher
    int line = 0;          ///< source line of the JUMPI, 0 without a linemap
    bool to_revert = false;  ///< the uncovered side only reverts

    friend bool operator==(const BranchConstraintInfo&, const BranchConstraintInfo&) = default;
};

enum class FunctionStatus : uint8_t
{
    fully_uncovered,
    partially_covered,
};

const char* to_string(FunctionStatus s) noexcept;

struct UncoveredFunction
{
    bytecode::FunctionSig sig;
    FunctionStatus status = FunctionStatus::partially_covered;
    std::vector<uint32_t> uncovered_offsets;
    std::vector<BranchConstraintInfo> blocking;
};

/// Every JUMPI (covered itself) with exactly one covered successor, in offset order.
std::vector<BranchConstraintInfo> extract_bottlenecks(const ContractBundle& contract, const CoverageMap& map);

/// One entry per function owning an uncovered instruction, in ABI order. A function that
/// was never entered is blocked by the dispatcher comparison on its selector.
/// Throws Error(MissingBodyRange).
std::vector<UncoveredFunction> extract_uncovered_functions(const ContractBundle& contract, const CoverageMap& map);

/// Text listing used in forecast prompts and logs; "none" for an empty list.
std::string render_uncovered(const std::vector<UncoveredFunction>& functions);

}  // namespace sctest::coverage
