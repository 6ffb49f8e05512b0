// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/common/bytes.hpp>

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sctest::bytecode
{
struct AbiType
{
    enum class Kind : uint8_t
    {
        uint,
        address,
        boolean,
        bytes,
        uint_array,
    };

    Kind kind = Kind::uint;
    unsigned bits = 256;  ///< element width for uint and uint_array

    static AbiType uint(unsigned bits = 256) { return {Kind::uint, bits}; }
    static AbiType address() { return {Kind::address, 160}; }
    static AbiType boolean() { return {Kind::boolean, 1}; }
    static AbiType bytes() { return {Kind::bytes, 8}; }
    static AbiType uint_array(unsigned bits = 256) { return {Kind::uint_array, bits}; }

    /// Accepts the canonical spellings only: uint8..uint256 (the listed widths), address,
    /// bool, bytes, uintN[]. "uint" alone is not canonical.
    static std::optional<AbiType> parse(std::string_view text);
    std::string canonical() const;

    bool is_dynamic() const noexcept { return kind == Kind::bytes || kind == Kind::uint_array; }
    /// Largest value a static word (or array element) may hold.
    U256 max_value() const noexcept;

    friend bool operator==(const AbiType&, const AbiType&) = default;
};

/// A typed argument. Static types use `word`; bytes uses `bytes`; arrays use `items`.
struct AbiValue
{
    U256 word;
    Bytes bytes;
    std::vector<U256> items;

    static AbiValue of_word(U256 w) { return {w, {}, {}}; }
    static AbiValue of_bytes(Bytes b) { return {{}, std::move(b), {}}; }
    static AbiValue of_items(std::vector<U256> v) { return {{}, {}, std::move(v)}; }

    /// Type-default seed: 0, zero address, false, empty bytes, empty array.
    static AbiValue zero() { return {}; }

    friend bool operator==(const AbiValue&, const AbiValue&) = default;
};

/// Renders a value as DSL/prompt text: decimal integers, 0x addresses, true/false,
/// 0x byte strings, [a,b,c] arrays.
std::string render_value(const AbiType& type, const AbiValue& value);

using Selector = std::array<uint8_t, 4>;

Selector selector_of(std::string_view signature) noexcept;
inline uint32_t selector_word(const Selector& s) noexcept
{
    return (uint32_t{s[0]} << 24) | (uint32_t{s[1]} << 16) | (uint32_t{s[2]} << 8) | s[3];
}

struct FunctionSig
{
    std::string name;
    std::vector<AbiType> params;
    std::vector<std::string> param_names;
    Selector selector{};
    std::optional<uint32_t> entry_offset;
    std::optional<std::pair<uint32_t, uint32_t>> body_range;
    bool is_property = false;

    std::string signature() const;
    /// "name(type a, type b)" as shown to models and in reports.
    std::string declaration() const;
    int param_index(std::string_view param_name) const noexcept;
};

/// Parses the abi.json manifest (see README). Throws Error(SchemaError) with a
/// JSON-path location.
std::vector<FunctionSig> parse_abi(std::string_view json_text);

const FunctionSig* find_function(const std::vector<FunctionSig>& abi, std::string_view name) noexcept;
const FunctionSig* find_function(const std::vector<FunctionSig>& abi, const Selector& sel) noexcept;

}  // namespace sctest::bytecode
