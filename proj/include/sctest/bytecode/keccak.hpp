// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/common/bytes.hpp>

#include <string_view>

namespace sctest::bytecode
{
/// Keccak-256 with the original (pre-FIPS-202) 0x01 padding, as used by the EVM.
Hash256 keccak256(BytesView data) noexcept;

inline Hash256 keccak256(std::string_view text) noexcept
{
    return keccak256(BytesView{reinterpret_cast<const uint8_t*>(text.data()), text.size()});
}

inline U256 keccak256_word(BytesView data) noexcept
{
    return U256::from_be(keccak256(data));
}

}  // namespace sctest::bytecode
