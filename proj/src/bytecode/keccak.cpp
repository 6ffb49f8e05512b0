// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>

#include <cstring>

namespace sctest::bytecode
{
namespace
{
constexpr uint64_t round_constants[24] = {0x0000000000000001ULL, 0x0000000000008082ULL,
    0x800000000000808aULL, 0x8000000080008000ULL, 0x000000000000808bULL, 0x0000000080000001ULL,
    0x8000000080008081ULL, 0x8000000000008009ULL, 0x000000000000008aULL, 0x0000000000000088ULL,
    0x0000000080008009ULL, 0x000000008000000aULL, 0x000000008000808bULL, 0x800000000000008bULL,
    0x8000000000008089ULL, 0x8000000000008003ULL, 0x8000000000008002ULL, 0x8000000000000080ULL,
    0x000000000000800aULL, 0x800000008000000aULL, 0x8000000080008081ULL, 0x8000000000008080ULL,
    0x0000000080000001ULL, 0x8000000080008008ULL};

constexpr unsigned rotations[25] = {
    0, 1, 62, 28, 27, 36, 44, 6, 55, 20, 3, 10, 43, 25, 39, 41, 45, 15, 21, 8, 18, 2, 61, 56, 14};

constexpr uint64_t rotl(uint64_t x, unsigned n) noexcept
{
    return n == 0 ? x : (x << n) | (x >> (64 - n));
}

void keccak_f1600(uint64_t a[25]) noexcept
{
    for (uint64_t rc : round_constants)
    {
        // theta
        uint64_t c[5];
        for (int x = 0; x < 5; ++x)
            c[x] = a[x] ^ a[x + 5] ^ a[x + 10] ^ a[x + 15] ^ a[x + 20];
        for (int x = 0; x < 5; ++x)
        {
            const uint64_t d = c[(x + 4) % 5] ^ rotl(c[(x + 1) % 5], 1);
            for (int y = 0; y < 25; y += 5)
                a[y + x] ^= d;
        }
        // rho + pi
        uint64_t b[25];
        for (int x = 0; x < 5; ++x)
            for (int y = 0; y < 5; ++y)
                b[y + 5 * ((2 * x + 3 * y) % 5)] = rotl(a[x + 5 * y], rotations[x + 5 * y]);
        // chi
        for (int y = 0; y < 25; y += 5)
            for (int x = 0; x < 5; ++x)
                a[y + x] = b[y + x] ^ (~b[y + (x + 1) % 5] & b[y + (x + 2) % 5]);
        // iota
        a[0] ^= rc;
    }
}

uint64_t load_le(const uint8_t* p) noexcept
{
    uint64_t v = 0;
    for (int i = 7; i >= 0; --i)
        v = (v << 8) | p[i];
    return v;
}
}  // namespace

Hash256 keccak256(BytesView data) noexcept
{
    constexpr size_t rate = 136;
    uint64_t state[25]{};

    size_t pos = 0;
    while (data.size() - pos >= rate)
    {
        for (size_t i = 0; i < rate / 8; ++i)
            state[i] ^= load_le(data.data() + pos + i * 8);
        keccak_f1600(state);
        pos += rate;
    }

    uint8_t block[rate]{};
    const size_t rem = data.size() - pos;
    if (rem != 0)
        std::memcpy(block, data.data() + pos, rem);
    block[rem] ^= 0x01;
    block[rate - 1] ^= 0x80;
    for (size_t i = 0; i < rate / 8; ++i)
        state[i] ^= load_le(block + i * 8);
    keccak_f1600(state);

    Hash256 out{};
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 8; ++j)
            out[i * 8 + j] = static_cast<uint8_t>(state[i] >> (8 * j));
    return out;
}

}  // namespace sctest::bytecode
