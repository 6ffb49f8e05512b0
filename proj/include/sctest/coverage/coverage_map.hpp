// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/bundle.hpp>

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace sctest::coverage
{
using bytecode::ContractBundle;

/// Paths longer than this many blocks are hashed over their prefix only.
inline constexpr size_t max_path_blocks = 4096;

/// Instruction and path coverage, keyed by contract address.
struct CoverageMap
{
    std::map<Address, std::vector<bool>> bits;  ///< one flag per code byte; set only at instruction starts
    std::set<uint64_t> paths;

    bool covered(const Address& at, uint32_t offset) const noexcept;
    size_t covered_count(const Address& at) const noexcept;
    size_t covered_count() const noexcept;

    friend bool operator==(const CoverageMap&, const CoverageMap&) = default;
};

/// Block ids entered by a trace, in order (a block counts each time its first
/// instruction executes).
std::vector<uint32_t> block_sequence(const ContractBundle& contract, std::span<const uint32_t> trace);

/// 64-bit FNV-1a over the little-endian block ids, truncated at max_path_blocks.
uint64_t path_hash(std::span<const uint32_t> blocks) noexcept;

/// Adds a trace of `contract` deployed at `at`. Offsets that are not instruction starts are
/// ignored. Returns the number of newly covered instructions.
size_t merge(CoverageMap& map, const ContractBundle& contract, const Address& at,
    std::span<const uint32_t> trace);

/// Same, for the contract at its genesis address.
size_t merge(CoverageMap& map, const ContractBundle& contract, std::span<const uint32_t> trace);

/// Bitwise union; returns the number of newly covered instructions.
size_t merge(CoverageMap& into, const CoverageMap& other);

std::string to_json(const CoverageMap& map);
CoverageMap coverage_from_json(std::string_view text);

}  // namespace sctest::coverage
