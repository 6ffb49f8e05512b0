// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/coverage/coverage_map.hpp>

#include <json.hpp>

#include <algorithm>
#include <cstdio>

namespace sctest::coverage
{
bool CoverageMap::covered(const Address& at, uint32_t offset) const noexcept
{
    const auto it = bits.find(at);
    return it != bits.end() && offset < it->second.size() && it->second[offset];
}

size_t CoverageMap::covered_count(const Address& at) const noexcept
{
    const auto it = bits.find(at);
    return it == bits.end() ? 0 : static_cast<size_t>(std::count(it->second.begin(), it->second.end(), true));
}

size_t CoverageMap::covered_count() const noexcept
{
    size_t n = 0;
    for (const auto& [a, v] : bits)
        n += static_cast<size_t>(std::count(v.begin(), v.end(), true));
    return n;
}

std::vector<uint32_t> block_sequence(const ContractBundle& contract, std::span<const uint32_t> trace)
{
    std::vector<uint32_t> out;
    const auto& program = *contract.program;
    const auto& cfg = *contract.cfg;
    for (const uint32_t off : trace)
    {
        const int idx = program.index_at(off);
        if (idx < 0)
            continue;
        const uint32_t b = cfg.block_of_index(static_cast<size_t>(idx));
        if (cfg.blocks[b].first == static_cast<uint32_t>(idx))
            out.push_back(b);
    }
    return out;
}

uint64_t path_hash(std::span<const uint32_t> blocks) noexcept
{
    uint64_t h = 0xcbf29ce484222325ULL;
    const size_t n = std::min(blocks.size(), max_path_blocks);
    for (size_t i = 0; i < n; ++i)
        for (int k = 0; k < 4; ++k)
        {
            h ^= (blocks[i] >> (8 * k)) & 0xffu;
            h *= 0x100000001b3ULL;
        }
    return h;
}

size_t merge(CoverageMap& map, const ContractBundle& contract, const Address& at, std::span<const uint32_t> trace)
{
    const auto& program = *contract.program;
    auto& bits = map.bits[at];
    if (bits.size() < program.code().size())
        bits.resize(program.code().size(), false);
    size_t added = 0;
    for (const uint32_t off : trace)
    {
        if (program.index_at(off) < 0 || bits[off])
            continue;
        bits[off] = true;
        ++added;
    }
    if (!trace.empty())
        map.paths.insert(path_hash(block_sequence(contract, trace)));
    return added;
}

size_t merge(CoverageMap& map, const ContractBundle& contract, std::span<const uint32_t> trace)
{
    return merge(map, contract, contract.genesis.contract_address, trace);
}

size_t merge(CoverageMap& into, const CoverageMap& other)
{
    size_t added = 0;
    for (const auto& [at, v] : other.bits)
    {
        auto& mine = into.bits[at];
        if (mine.size() < v.size())
            mine.resize(v.size(), false);
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i] && !mine[i])
            {
                mine[i] = true;
                ++added;
            }
    }
    into.paths.insert(other.paths.begin(), other.paths.end());
    return added;
}

std::string to_json(const CoverageMap& map)
{
    nlohmann::ordered_json j;
    j["contracts"] = nlohmann::ordered_json::object();
    for (const auto& [at, v] : map.bits)
    {
        nlohmann::ordered_json offs = nlohmann::ordered_json::array();
        for (size_t i = 0; i < v.size(); ++i)
            if (v[i])
                offs.push_back(i);
        j["contracts"][at.to_hex()] = {{"code_size", v.size()}, {"covered", offs}};
    }
    auto paths = nlohmann::ordered_json::array();
    for (const uint64_t p : map.paths)
    {
        char buf[19];
        std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(p));
        paths.push_back(buf);
    }
    j["paths"] = paths;
    return j.dump(1);
}

CoverageMap coverage_from_json(std::string_view text)
{
    CoverageMap map;
    try
    {
        const auto j = nlohmann::json::parse(text);
        for (const auto& [addr, c] : j.at("contracts").items())
        {
            const auto at = Address::parse(addr);
            if (!at)
                throw Error(ErrorCode::SchemaError, "contracts: bad address " + addr);
            auto& v = map.bits[*at];
            v.assign(c.at("code_size").get<size_t>(), false);
            for (const auto& off : c.at("covered"))
            {
                const auto o = off.get<size_t>();
                if (o >= v.size())
                    throw Error(ErrorCode::SchemaError, "contracts." + addr + ": offset out of range");
                v[o] = true;
            }
        }
        for (const auto& p : j.at("paths"))
            map.paths.insert(std::stoull(p.get<std::string>(), nullptr, 16));
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(ErrorCode::SchemaError, std::string{"coverage json: "} + e.what());
    }
    return map;
}

}  // namespace sctest::coverage
