// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/abi.hpp>

#include <optional>
#include <vector>

namespace sctest::evm
{
/// Throws Error(TypeMismatch/ValueOutOfRange) when the value does not fit the type.
void check_value(const bytecode::AbiType& type, const bytecode::AbiValue& value);

/// selector ++ ABI head/tail encoding. Throws ArityMismatch, TypeMismatch, ValueOutOfRange.
Bytes encode_calldata(const bytecode::FunctionSig& sig, const std::vector<bytecode::AbiValue>& args);

/// Strict inverse of encode_calldata for well-formed input; nullopt otherwise.
std::optional<std::vector<bytecode::AbiValue>> decode_calldata(
    const bytecode::FunctionSig& sig, BytesView data);

/// Where each argument lives in encoded calldata.
struct ArgLayout
{
    uint32_t head = 0;         ///< offset of the head word
    uint32_t length_word = 0;  ///< dynamic only: offset of the length word
    uint32_t payload = 0;      ///< dynamic only: offset of the first element/byte
    uint32_t count = 0;        ///< dynamic only: element count (bytes for `bytes`)
};

/// Layout of encode_calldata(sig, args); offsets include the 4-byte selector.
std::vector<ArgLayout> calldata_layout(
    const bytecode::FunctionSig& sig, const std::vector<bytecode::AbiValue>& args);

}  // namespace sctest::evm
