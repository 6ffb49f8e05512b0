// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/fuzzing/testcase.hpp>

#include <random>
#include <span>

namespace sctest::fuzzing
{
using Rng = std::mt19937_64;

inline constexpr size_t max_array_items = 32;
inline constexpr size_t max_bytes_len = 256;

/// Everything needed to turn target calls into transactions.
struct TargetContext
{
    const bytecode::ContractBundle& bundle;
    const FuzzTarget& target;

    Address sender_of(const TargetCall& call) const;
    Address contract() const { return bundle.genesis.contract_address; }
    evm::Transaction make(const TargetCall& call, std::vector<AbiValue> args) const;
    /// Setup transactions followed by one transaction per fuzz call with its seeds.
    TestCase seed_testcase() const;
    std::vector<evm::Transaction> setup_txs() const;
    /// Addresses a mutated address parameter may take.
    std::vector<Address> address_pool() const;
};

/// The boundary set of an N-bit word for a given seed: 0, 1, 2^N-1, 2^(N-1), seed+1, seed-1
/// (wrapping within N bits).
std::vector<U256> boundary_values(unsigned bits, const U256& seed);

/// Applies a short stack of mutations to the fuzzed part of `tc`. Setup transactions and
/// non-mutable arguments are never changed. `splice_pool` supplies partners for sequence
/// splicing.
TestCase mutate(const TestCase& tc, const TargetContext& ctx, Rng& rng,
    std::span<const TestCase* const> splice_pool = {});

/// Single word mutation used by the stacked mutator, exposed for tests.
enum class WordMutation : uint8_t
{
    boundary,
    random,
    bit_flip,
};
U256 mutate_word(const U256& current, unsigned bits, const U256& seed, WordMutation how, Rng& rng);

}  // namespace sctest::fuzzing
