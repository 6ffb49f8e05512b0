// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/common/u256.hpp>

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace sctest
{
using Bytes = std::vector<uint8_t>;
using BytesView = std::span<const uint8_t>;
using Hash256 = std::array<uint8_t, 32>;

/// 20-byte account address held in the low bits of a word.
struct Address
{
    std::array<uint8_t, 20> bytes{};

    static Address from_word(const U256& word) noexcept;
    U256 to_word() const noexcept;
    /// Parses "0x" + up to 40 hex digits.
    static std::optional<Address> parse(std::string_view text);
    /// Always 0x + 40 lowercase hex digits.
    std::string to_hex() const;

    friend bool operator==(const Address&, const Address&) = default;
    friend auto operator<=>(const Address&, const Address&) = default;
};

std::string to_hex(BytesView data, bool prefix = true);
/// Decodes hex text with optional 0x prefix; whitespace is ignored.
std::optional<Bytes> from_hex(std::string_view text);

inline Bytes to_bytes(std::string_view s)
{
    return Bytes(s.begin(), s.end());
}

}  // namespace sctest
