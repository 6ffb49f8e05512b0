// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/evm/snapshot.hpp>

namespace sctest::evm
{
Hash256 prefix_key(const std::vector<Transaction>& prefix)
{
    std::string text = "prefix:" + std::to_string(prefix.size());
    for (const auto& tx : prefix)
        text += "\n" + canonical(tx);
    return bytecode::keccak256(std::string_view{text});
}

Snapshot snapshot_of(const EvmWorld& world, const std::vector<Transaction>& prefix)
{
    Snapshot s;
    s.key = prefix_key(prefix);
    s.world = world;
    for (const auto& tx : prefix)
        s.results.push_back(execute_tx_inplace(s.world, tx));
    return s;
}

size_t approx_bytes(const Snapshot& s)
{
    size_t n = sizeof(Snapshot);
    n += s.world.balances.size() * 96;
    for (const auto& [a, st] : s.world.storage)
        n += 96 + st.size() * 112;
    for (const auto& r : s.results)
        n += sizeof(ExecResult) + r.trace.size() * sizeof(uint32_t) + r.output.size();
    return n;
}

std::shared_ptr<const Snapshot> SnapshotCache::get_or_create(
    const Hash256& key, const std::function<Snapshot()>& make)
{
    {
        std::lock_guard lock{mu_};
        if (const auto it = index_.find(key); it != index_.end())
        {
            lru_.splice(lru_.begin(), lru_, it->second);
            ++hits_;
            return it->second->second;
        }
        ++misses_;
    }
    // Built outside the lock; a concurrent builder of the same key simply loses the race.
    auto snap = std::make_shared<const Snapshot>(make());
    std::lock_guard lock{mu_};
    if (const auto it = index_.find(key); it != index_.end())
        return it->second->second;
    const size_t size = approx_bytes(*snap);
    if (size > budget_)
        return snap;
    lru_.emplace_front(key, snap);
    index_.emplace(key, lru_.begin());
    bytes_ += size;
    evict_locked();
    return snap;
}

void SnapshotCache::evict_locked()
{
    while (bytes_ > budget_ && !lru_.empty())
    {
        const auto& victim = lru_.back();
        bytes_ -= approx_bytes(*victim.second);
        index_.erase(victim.first);
        lru_.pop_back();
    }
}

size_t SnapshotCache::hits() const
{
    std::lock_guard lock{mu_};
    return hits_;
}

size_t SnapshotCache::misses() const
{
    std::lock_guard lock{mu_};
    return misses_;
}

size_t SnapshotCache::entries() const
{
    std::lock_guard lock{mu_};
    return lru_.size();
}

uint64_t SnapshotCache::bytes() const
{
    std::lock_guard lock{mu_};
    return bytes_;
}

}  // namespace sctest::evm
