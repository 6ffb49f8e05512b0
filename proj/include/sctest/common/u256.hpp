// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace sctest
{
/// Unsigned 256-bit integer with EVM wrap-around semantics.
///
/// All arithmetic is modulo 2^256. Division and remainder by zero yield zero.
class U256
{
public:
    constexpr U256() noexcept = default;
    constexpr U256(uint64_t v) noexcept : limbs_{v, 0, 0, 0} {}  // NOLINT(implicit)
    constexpr U256(uint64_t l3, uint64_t l2, uint64_t l1, uint64_t l0) noexcept
      : limbs_{l0, l1, l2, l3}
    {}

    static constexpr U256 max() noexcept { return {~0ULL, ~0ULL, ~0ULL, ~0ULL}; }

    /// Big-endian load of up to 32 bytes (shorter input is right-aligned).
    static U256 from_be(std::span<const uint8_t> bytes) noexcept;
    std::array<uint8_t, 32> to_be() const noexcept;

    /// Accepts decimal or 0x-prefixed hex. Returns nullopt on bad digits or overflow.
    static std::optional<U256> parse(std::string_view text);

    std::string to_dec() const;
    /// Minimal 0x-prefixed lowercase hex ("0x0" for zero).
    std::string to_hex() const;

    constexpr uint64_t limb(size_t i) const noexcept { return limbs_[i]; }
    constexpr uint64_t low64() const noexcept { return limbs_[0]; }
    constexpr bool fits_u64() const noexcept { return (limbs_[1] | limbs_[2] | limbs_[3]) == 0; }
    constexpr bool is_zero() const noexcept
    {
        return (limbs_[0] | limbs_[1] | limbs_[2] | limbs_[3]) == 0;
    }
    explicit constexpr operator bool() const noexcept { return !is_zero(); }

    unsigned bit_length() const noexcept;
    bool bit(unsigned i) const noexcept { return i < 256 && ((limbs_[i / 64] >> (i % 64)) & 1); }

    friend constexpr bool operator==(const U256&, const U256&) noexcept = default;
    friend constexpr std::strong_ordering operator<=>(const U256& a, const U256& b) noexcept
    {
        for (int i = 3; i >= 0; --i)
            if (a.limbs_[i] != b.limbs_[i])
                return a.limbs_[i] <=> b.limbs_[i];
        return std::strong_ordering::equal;
    }

    friend U256 operator+(const U256& a, const U256& b) noexcept;
    friend U256 operator-(const U256& a, const U256& b) noexcept;
    friend U256 operator*(const U256& a, const U256& b) noexcept;
    friend U256 operator/(const U256& a, const U256& b) noexcept;
    friend U256 operator%(const U256& a, const U256& b) noexcept;
    friend U256 operator&(const U256& a, const U256& b) noexcept;
    friend U256 operator|(const U256& a, const U256& b) noexcept;
    friend U256 operator^(const U256& a, const U256& b) noexcept;
    friend U256 operator~(const U256& a) noexcept;
    friend U256 operator<<(const U256& a, unsigned shift) noexcept;
    friend U256 operator>>(const U256& a, unsigned shift) noexcept;

    U256& operator+=(const U256& b) noexcept { return *this = *this + b; }
    U256& operator-=(const U256& b) noexcept { return *this = *this - b; }
    U256& operator*=(const U256& b) noexcept { return *this = *this * b; }

    /// Quotient and remainder in one pass; both zero when the divisor is zero.
    static std::pair<U256, U256> divmod(const U256& a, const U256& b) noexcept;

private:
    std::array<uint64_t, 4> limbs_{};  // little-endian limbs
};

U256 exp(U256 base, U256 exponent) noexcept;

/// Shift by a 256-bit amount; shifts >= 256 give zero.
U256 shl(const U256& value, const U256& shift) noexcept;
U256 shr(const U256& value, const U256& shift) noexcept;

/// 2^bits - 1, saturating at 256 bits.
U256 low_mask(unsigned bits) noexcept;

/// Multiplicative inverse modulo 2^256 of an odd value.
U256 inverse_mod_2_256(const U256& odd) noexcept;

}  // namespace sctest

template <>
struct std::hash<sctest::U256>
{
    size_t operator()(const sctest::U256& v) const noexcept
    {
        uint64_t h = 0xcbf29ce484222325ULL;
        for (size_t i = 0; i < 4; ++i)
            h = (h ^ v.limb(i)) * 0x100000001b3ULL;
        return h;
    }
};
