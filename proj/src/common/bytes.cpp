// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/bytes.hpp>

#include <algorithm>
#include <cctype>

namespace sctest
{
Address Address::from_word(const U256& word) noexcept
{
    Address a;
    const auto be = word.to_be();
    std::copy(be.begin() + 12, be.end(), a.bytes.begin());
    return a;
}

U256 Address::to_word() const noexcept
{
    return U256::from_be(bytes);
}

std::optional<Address> Address::parse(std::string_view text)
{
    if (text.size() < 3 || text[0] != '0' || (text[1] != 'x' && text[1] != 'X'))
        return std::nullopt;
    const auto v = U256::parse(text);
    if (!v || v->bit_length() > 160)
        return std::nullopt;
    return from_word(*v);
}

std::string Address::to_hex() const
{
    return sctest::to_hex(bytes, true);
}

std::string to_hex(BytesView data, bool prefix)
{
    static constexpr char digits[] = "0123456789abcdef";
    std::string out = prefix ? "0x" : "";
    out.reserve(out.size() + data.size() * 2);
    for (uint8_t b : data)
    {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

std::optional<Bytes> from_hex(std::string_view text)
{
    std::string digits;
    digits.reserve(text.size());
    for (char c : text)
        if (!std::isspace(static_cast<unsigned char>(c)))
            digits.push_back(c);
    std::string_view d = digits;
    if (d.size() >= 2 && d[0] == '0' && (d[1] == 'x' || d[1] == 'X'))
        d.remove_prefix(2);
    if (d.size() % 2 != 0)
        return std::nullopt;
    Bytes out;
    out.reserve(d.size() / 2);
    for (size_t i = 0; i < d.size(); i += 2)
    {
        int v = 0;
        for (size_t j = 0; j < 2; ++j)
        {
            const char c = d[i + j];
            int n = -1;
            if (c >= '0' && c <= '9')
                n = c - '0';
            else if (c >= 'a' && c <= 'f')
                n = c - 'a' + 10;
            else if (c >= 'A' && c <= 'F')
                n = c - 'A' + 10;
            if (n < 0)
                return std::nullopt;
            v = v * 16 + n;
        }
        out.push_back(static_cast<uint8_t>(v));
    }
    return out;
}

}  // namespace sctest
