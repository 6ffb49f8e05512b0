// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace sctest
{
enum class ErrorCode
{
    // bytecode
    TruncatedImmediate,
    SchemaError,
    AssemblyError,
    // evm
    DuplicateAddress,
    AddressInUse,
    ArityMismatch,
    TypeMismatch,
    ValueOutOfRange,
    UnknownDestination,
    MalformedCalldata,
    InsufficientBalance,
    // coverage
    MissingBodyRange,
    // fuzzing
    EmptyAbi,
    InvalidTarget,
    // concolic
    NoSymbolicInput,
    // models
    MissingGroundTruth,
    UnexpectedGroundTruth,
    Unparseable,
    NoBlockingConstraint,
    EmptyResponse,
    ModelError,
    // orchestrator
    EmptyInput,
    BundleLoad,
    InvalidConfig,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string{to_string(code)} + ": " + message), code_{code}
    {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace sctest
