// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/evm/interpreter.hpp>
#include <sctest/fuzzing/testcase.hpp>

#include <vector>

namespace sctest::fuzzing
{
/// Assertion failure when `result` halted on INVALID.
std::vector<Finding> detect_assert(const evm::ExecResult& result, const std::string& function,
    const bytecode::ContractBundle& bundle);

/// Calls every property function with no arguments on a copy of `world_after`; a revert,
/// an exceptional halt or a returned zero word is a violation. A property that returns no
/// data holds.
std::vector<Finding> detect_property_violations(const evm::EvmWorld& world_after,
    const bytecode::ContractBundle& bundle);

/// Both detectors for one executed transaction.
std::vector<Finding> detect_bugs(const evm::ExecResult& result, const std::string& function,
    const evm::EvmWorld& world_after, const bytecode::ContractBundle& bundle);

}  // namespace sctest::fuzzing
