// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/fuzzing/detectors.hpp>

#include <map>

namespace sctest::fuzzing
{
namespace
{
coverage::CoverageMap coverage_of(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const TestCase& tc)
{
    coverage::CoverageMap m;
    evm::EvmWorld w = world;
    for (const auto& tx : tc.txs)
    {
        try
        {
            coverage::merge(m, bundle, bundle.genesis.contract_address, evm::execute_tx_inplace(w, tx).trace);
        }
        catch (const Error&)
        {
            break;
        }
    }
    return m;
}
}  // namespace

Corpus minimize_corpus(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const Corpus& corpus)
{
    const Address at = bundle.genesis.contract_address;
    std::vector<coverage::CoverageMap> maps;
    std::map<uint32_t, size_t> bit_count;
    std::map<uint64_t, size_t> path_count;
    for (const auto& e : corpus.entries)
    {
        maps.push_back(coverage_of(bundle, world, e.tc));
        const auto it = maps.back().bits.find(at);
        if (it != maps.back().bits.end())
            for (uint32_t off = 0; off < it->second.size(); ++off)
                if (it->second[off])
                    ++bit_count[off];
        for (const uint64_t p : maps.back().paths)
            ++path_count[p];
    }
    std::vector<bool> keep(corpus.entries.size(), true);
    for (size_t i = corpus.entries.size(); i-- > 0;)
    {
        const auto& m = maps[i];
        bool unique = false;
        const auto it = m.bits.find(at);
        if (it != m.bits.end())
            for (uint32_t off = 0; off < it->second.size() && !unique; ++off)
                unique = it->second[off] && bit_count[off] == 1;
        for (const uint64_t p : m.paths)
            unique = unique || path_count[p] == 1;
        if (unique)
            continue;
        keep[i] = false;
        if (it != m.bits.end())
            for (uint32_t off = 0; off < it->second.size(); ++off)
                if (it->second[off])
                    --bit_count[off];
        for (const uint64_t p : m.paths)
            --path_count[p];
    }
    Corpus out;
    for (size_t i = 0; i < corpus.entries.size(); ++i)
        if (keep[i])
            out.entries.push_back(corpus.entries[i]);
    return out;
}

ReplayResult replay(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const std::vector<TestCase>& testcases)
{
    ReplayResult r;
    const Address at = bundle.genesis.contract_address;
    for (const auto& tc : testcases)
    {
        evm::EvmWorld w = world;
        try
        {
            for (const auto& tx : tc.txs)
            {
                const auto res = evm::execute_tx_inplace(w, tx);
                coverage::merge(r.coverage, bundle, at, res.trace);
                for (auto& f : detect_assert(res, tx.function_call, bundle))
                    r.bugs.add(std::move(f), tc);
            }
            for (auto& f : detect_property_violations(w, bundle))
                r.bugs.add(std::move(f), tc);
        }
        catch (const Error&)
        {
            r.stale.push_back(tc.id);
        }
    }
    return r;
}

ReplayResult replay(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const Corpus& corpus)
{
    std::vector<TestCase> tcs;
    for (const auto& e : corpus.entries)
        tcs.push_back(e.tc);
    return replay(bundle, world, tcs);
}

}  // namespace sctest::fuzzing
