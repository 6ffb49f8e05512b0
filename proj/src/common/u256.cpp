// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/u256.hpp>

#include <algorithm>

namespace sctest
{
namespace
{
using u128 = unsigned __int128;

int hex_digit(char c) noexcept
{
    if (c >= '0' && c <= '9')
        return c - '0';
    if (c >= 'a' && c <= 'f')
        return c - 'a' + 10;
    if (c >= 'A' && c <= 'F')
        return c - 'A' + 10;
    return -1;
}

// (q, r) = a / d for a single-limb divisor.
std::pair<U256, uint64_t> divmod_small(const U256& a, uint64_t d) noexcept
{
    uint64_t q[4]{};
    u128 rem = 0;
    for (int i = 3; i >= 0; --i)
    {
        const u128 cur = (rem << 64) | a.limb(static_cast<size_t>(i));
        q[i] = static_cast<uint64_t>(cur / d);
        rem = cur % d;
    }
    return {U256{q[3], q[2], q[1], q[0]}, static_cast<uint64_t>(rem)};
}
}  // namespace

U256 U256::from_be(std::span<const uint8_t> bytes) noexcept
{
    U256 r;
    const size_t n = std::min<size_t>(bytes.size(), 32);
    const auto tail = bytes.subspan(bytes.size() - n);
    for (size_t i = 0; i < n; ++i)
    {
        const size_t bit_pos = (n - 1 - i) * 8;
        r.limbs_[bit_pos / 64] |= uint64_t{tail[i]} << (bit_pos % 64);
    }
    return r;
}

std::array<uint8_t, 32> U256::to_be() const noexcept
{
    std::array<uint8_t, 32> out{};
    for (size_t i = 0; i < 32; ++i)
    {
        const size_t bit_pos = (31 - i) * 8;
        out[i] = static_cast<uint8_t>(limbs_[bit_pos / 64] >> (bit_pos % 64));
    }
    return out;
}

std::optional<U256> U256::parse(std::string_view text)
{
    if (text.empty())
        return std::nullopt;
    U256 r;
    if (text.size() > 2 && text[0] == '0' && (text[1] == 'x' || text[1] == 'X'))
    {
        text.remove_prefix(2);
        if (text.size() > 64)
        {
            const auto nz = text.find_first_not_of('0');
            if (nz == std::string_view::npos)
                return U256{};
            text.remove_prefix(nz);
            if (text.size() > 64)
                return std::nullopt;
        }
        for (char c : text)
        {
            const int d = hex_digit(c);
            if (d < 0)
                return std::nullopt;
            r = (r << 4) | U256{static_cast<uint64_t>(d)};
        }
        return r;
    }
    for (char c : text)
    {
        if (c < '0' || c > '9')
            return std::nullopt;
        const U256 next = r * U256{10} + U256{static_cast<uint64_t>(c - '0')};
        if (divmod_small(next, 10).first != r)
            return std::nullopt;
        r = next;
    }
    return r;
}

std::string U256::to_dec() const
{
    if (is_zero())
        return "0";
    std::string out;
    U256 cur = *this;
    while (!cur.is_zero())
    {
        auto [q, r] = divmod_small(cur, 10);
        out.push_back(static_cast<char>('0' + r));
        cur = q;
    }
    std::reverse(out.begin(), out.end());
    return out;
}

std::string U256::to_hex() const
{
    static constexpr char digits[] = "0123456789abcdef";
    if (is_zero())
        return "0x0";
    std::string out;
    U256 cur = *this;
    while (!cur.is_zero())
    {
        out.push_back(digits[cur.limbs_[0] & 0xf]);
        cur = cur >> 4;
    }
    out += "x0";
    std::reverse(out.begin(), out.end());
    return out;
}

unsigned U256::bit_length() const noexcept
{
    for (int i = 3; i >= 0; --i)
        if (limbs_[i] != 0)
            return static_cast<unsigned>(i * 64 + 64 - __builtin_clzll(limbs_[i]));
    return 0;
}

U256 operator+(const U256& a, const U256& b) noexcept
{
    U256 r;
    uint64_t carry = 0;
    for (size_t i = 0; i < 4; ++i)
    {
        const u128 s = u128{a.limbs_[i]} + b.limbs_[i] + carry;
        r.limbs_[i] = static_cast<uint64_t>(s);
        carry = static_cast<uint64_t>(s >> 64);
    }
    return r;
}

U256 operator-(const U256& a, const U256& b) noexcept
{
    U256 r;
    uint64_t borrow = 0;
    for (size_t i = 0; i < 4; ++i)
    {
        const u128 d = u128{a.limbs_[i]} - b.limbs_[i] - borrow;
        r.limbs_[i] = static_cast<uint64_t>(d);
        borrow = static_cast<uint64_t>(d >> 64) & 1;
    }
    return r;
}

U256 operator*(const U256& a, const U256& b) noexcept
{
    U256 r;
    for (size_t i = 0; i < 4; ++i)
    {
        uint64_t carry = 0;
        for (size_t j = 0; i + j < 4; ++j)
        {
            const u128 p = u128{a.limbs_[i]} * b.limbs_[j] + r.limbs_[i + j] + carry;
            r.limbs_[i + j] = static_cast<uint64_t>(p);
            carry = static_cast<uint64_t>(p >> 64);
        }
    }
    return r;
}

std::pair<U256, U256> U256::divmod(const U256& a, const U256& b) noexcept
{
    if (b.is_zero())
        return {U256{}, U256{}};
    if (a < b)
        return {U256{}, a};
    if (b.fits_u64())
    {
        auto [q, r] = divmod_small(a, b.low64());
        return {q, U256{r}};
    }
    // Shift-subtract long division; divisor has > 64 bits so the loop is short.
    const unsigned shift = a.bit_length() - b.bit_length();
    U256 rem = a;
    U256 quot;
    U256 d = b << shift;
    for (int i = static_cast<int>(shift); i >= 0; --i)
    {
        if (rem >= d)
        {
            rem = rem - d;
            quot.limbs_[static_cast<unsigned>(i) / 64] |= uint64_t{1} << (static_cast<unsigned>(i) % 64);
        }
        d = d >> 1;
    }
    return {quot, rem};
}

U256 operator/(const U256& a, const U256& b) noexcept
{
    return U256::divmod(a, b).first;
}

U256 operator%(const U256& a, const U256& b) noexcept
{
    return U256::divmod(a, b).second;
}

U256 operator&(const U256& a, const U256& b) noexcept
{
    U256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs_[i] = a.limbs_[i] & b.limbs_[i];
    return r;
}

U256 operator|(const U256& a, const U256& b) noexcept
{
    U256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs_[i] = a.limbs_[i] | b.limbs_[i];
    return r;
}

U256 operator^(const U256& a, const U256& b) noexcept
{
    U256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs_[i] = a.limbs_[i] ^ b.limbs_[i];
    return r;
}

U256 operator~(const U256& a) noexcept
{
    U256 r;
    for (size_t i = 0; i < 4; ++i)
        r.limbs_[i] = ~a.limbs_[i];
    return r;
}

U256 operator<<(const U256& a, unsigned shift) noexcept
{
    if (shift >= 256)
        return {};
    U256 r;
    const unsigned limb_shift = shift / 64;
    const unsigned bit_shift = shift % 64;
    for (unsigned i = 3; i + 1 > limb_shift; --i)
    {
        uint64_t v = a.limbs_[i - limb_shift] << bit_shift;
        if (bit_shift != 0 && i > limb_shift)
            v |= a.limbs_[i - limb_shift - 1] >> (64 - bit_shift);
        r.limbs_[i] = v;
        if (i == 0)
            break;
    }
    return r;
}

U256 operator>>(const U256& a, unsigned shift) noexcept
{
    if (shift >= 256)
        return {};
    U256 r;
    const unsigned limb_shift = shift / 64;
    const unsigned bit_shift = shift % 64;
    for (unsigned i = 0; i + limb_shift < 4; ++i)
    {
        uint64_t v = a.limbs_[i + limb_shift] >> bit_shift;
        if (bit_shift != 0 && i + limb_shift + 1 < 4)
            v |= a.limbs_[i + limb_shift + 1] << (64 - bit_shift);
        r.limbs_[i] = v;
    }
    return r;
}

U256 exp(U256 base, U256 exponent) noexcept
{
    U256 result{1};
    while (!exponent.is_zero())
    {
        if (exponent.low64() & 1)
            result = result * base;
        base = base * base;
        exponent = exponent >> 1;
    }
    return result;
}

U256 shl(const U256& value, const U256& shift) noexcept
{
    if (!shift.fits_u64() || shift.low64() >= 256)
        return {};
    return value << static_cast<unsigned>(shift.low64());
}

U256 shr(const U256& value, const U256& shift) noexcept
{
    if (!shift.fits_u64() || shift.low64() >= 256)
        return {};
    return value >> static_cast<unsigned>(shift.low64());
}

U256 low_mask(unsigned bits) noexcept
{
    if (bits >= 256)
        return U256::max();
    return (U256{1} << bits) - U256{1};
}

U256 inverse_mod_2_256(const U256& odd) noexcept
{
    // Newton iteration: each step doubles the number of correct low bits.
    U256 x = odd;  // correct to 3 bits for odd inputs
    for (int i = 0; i < 8; ++i)
        x = x * (U256{2} - odd * x);
    return x;
}

}  // namespace sctest
