// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/evm/interpreter.hpp>

#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <unordered_map>

namespace sctest::evm
{
/// World state after a transaction prefix, keyed by the prefix.
struct Snapshot
{
    Hash256 key{};
    EvmWorld world;
    std::vector<ExecResult> results;  ///< results of the prefix transactions
};

/// Digest of the canonical serialization of a prefix.
Hash256 prefix_key(const std::vector<Transaction>& prefix);

/// Executes the prefix on a copy of `world` and captures the result.
Snapshot snapshot_of(const EvmWorld& world, const std::vector<Transaction>& prefix);

/// Rough heap footprint, used for the cache budget.
size_t approx_bytes(const Snapshot& s);

/// Thread-safe LRU cache of snapshots bounded by an approximate byte budget.
class SnapshotCache
{
public:
    explicit SnapshotCache(uint64_t budget_bytes) : budget_{budget_bytes} {}

    /// Returns the cached snapshot for `key`, or builds, stores and returns it.
    std::shared_ptr<const Snapshot> get_or_create(
        const Hash256& key, const std::function<Snapshot()>& make);

    size_t hits() const;
    size_t misses() const;
    size_t entries() const;
    uint64_t bytes() const;

private:
    struct KeyHash
    {
        size_t operator()(const Hash256& h) const noexcept
        {
            size_t v = 0;
            for (size_t i = 0; i < sizeof(size_t); ++i)
                v = (v << 8) | h[i];
            return v;
        }
    };
    using Lru = std::list<std::pair<Hash256, std::shared_ptr<const Snapshot>>>;

    void evict_locked();

    mutable std::mutex mu_;
    uint64_t budget_;
    uint64_t bytes_ = 0;
    size_t hits_ = 0;
    size_t misses_ = 0;
    Lru lru_;
    std::unordered_map<Hash256, Lru::iterator, KeyHash> index_;
};

}  // namespace sctest::evm
