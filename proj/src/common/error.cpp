// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>

namespace sctest
{
const char* to_string(ErrorCode code) noexcept
{
    switch (code)
    {
    case ErrorCode::TruncatedImmediate:
        return "TruncatedImmediate";
    case ErrorCode::SchemaError:
        return "SchemaError";
    case ErrorCode::AssemblyError:
        return "AssemblyError";
    case ErrorCode::DuplicateAddress:
        return "DuplicateAddress";
    case ErrorCode::AddressInUse:
        return "AddressInUse";
    case ErrorCode::ArityMismatch:
        return "ArityMismatch";
    case ErrorCode::TypeMismatch:
        return "TypeMismatch";
    case ErrorCode::ValueOutOfRange:
        return "ValueOutOfRange";
    case ErrorCode::UnknownDestination:
        return "UnknownDestination";
    case ErrorCode::MalformedCalldata:
        return "MalformedCalldata";
    case ErrorCode::InsufficientBalance:
        return "InsufficientBalance";
    case ErrorCode::MissingBodyRange:
        return "MissingBodyRange";
    case ErrorCode::EmptyAbi:
        return "EmptyAbi";
    case ErrorCode::InvalidTarget:
        return "InvalidTarget";
    case ErrorCode::NoSymbolicInput:
        return "NoSymbolicInput";
    case ErrorCode::MissingGroundTruth:
        return "MissingGroundTruth";
    case ErrorCode::UnexpectedGroundTruth:
        return "UnexpectedGroundTruth";
    case ErrorCode::Unparseable:
        return "Unparseable";
    case ErrorCode::NoBlockingConstraint:
        return "NoBlockingConstraint";
    case ErrorCode::EmptyResponse:
        return "EmptyResponse";
    case ErrorCode::ModelError:
        return "ModelError";
    case ErrorCode::EmptyInput:
        return "EmptyInput";
    case ErrorCode::BundleLoad:
        return "BundleLoad";
    case ErrorCode::InvalidConfig:
        return "InvalidConfig";
    }
    return "Unknown";
}

}  // namespace sctest
