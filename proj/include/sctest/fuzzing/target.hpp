// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/abi.hpp>
#include <sctest/common/bytes.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace sctest::fuzzing
{
using bytecode::AbiType;
using bytecode::AbiValue;
using bytecode::FunctionSig;

/// One argument of a call in a fuzz target.
struct CallArg
{
    AbiValue value;               ///< concrete value, or the seed of a mutable parameter
    bool is_mutable = false;
    std::string name;             ///< label after '?' for mutable parameters
    std::optional<std::string> alias;  ///< set when the value was written as an alias

    friend bool operator==(const CallArg&, const CallArg&) = default;
};

/// A call line. Setup calls have no mutable arguments.
struct TargetCall
{
    std::string function;
    std::vector<CallArg> args;
    std::string sender;  ///< alias name; empty means the default sender
    U256 value;
    uint64_t delay = 0;
    int line = 0;

    std::vector<std::string> mutable_params() const;
    friend bool operator==(const TargetCall&, const TargetCall&) = default;
};

enum class OrderMode : uint8_t
{
    fixed,
    shuffle,
};

struct FuzzTarget
{
    std::string name;
    std::map<std::string, Address> aliases;
    std::vector<TargetCall> setup;
    std::vector<TargetCall> fuzz;
    OrderMode order = OrderMode::fixed;

    friend bool operator==(const FuzzTarget&, const FuzzTarget&) = default;
};

enum class CompileCode : uint8_t
{
    E000,  ///< syntax
    E001,  ///< unknown function
    E002,  ///< arity mismatch
    E003,  ///< type mismatch
    E004,  ///< unknown alias
    E005,  ///< value out of range
};

const char* to_string(CompileCode c) noexcept;

struct CompileError
{
    CompileCode code = CompileCode::E000;
    int line = 0;  ///< 1-based
    int col = 0;   ///< 1-based
    std::string message;

    friend bool operator==(const CompileError&, const CompileError&) = default;
};

/// "E001 3:8 unknown function 'reemable'"
std::string render_error(const CompileError& e);
std::string render_errors(const std::vector<CompileError>& errors);

struct ParseResult
{
    std::optional<FuzzTarget> target;  ///< set only when errors is empty
    std::vector<CompileError> errors;

    bool ok() const noexcept { return errors.empty(); }
};

/// Validating compiler for the .ft language. Reports every error it can find.
ParseResult parse_target(std::string_view text, const std::vector<FunctionSig>& abi);

/// Canonical .ft text; parse_target(render_target(t)) reproduces t up to line numbers.
std::string render_target(const FuzzTarget& target, const std::vector<FunctionSig>& abi);

/// One fuzz call per action with every parameter mutable and zero seeds, shuffled order.
/// Throws Error(EmptyAbi).
FuzzTarget seed_initial_target(const std::vector<FunctionSig>& abi);

}  // namespace sctest::fuzzing
