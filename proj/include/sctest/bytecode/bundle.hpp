// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/abi.hpp>
#include <sctest/bytecode/cfg.hpp>
#include <sctest/bytecode/instruction.hpp>

#include <filesystem>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sctest::bytecode
{
struct GenesisAccount
{
    Address address;
    U256 balance;
};

/// Contents of world.json.
struct GenesisConfig
{
    std::vector<GenesisAccount> accounts;
    Address contract_address;
    uint64_t timestamp = 1'000'000;
    std::map<U256, U256> storage;  ///< initial contract storage, as a constructor would leave it

    /// One account 0x..a1 holding 100 ether, contract at 0x..c0.
    static GenesisConfig defaults();
};

/// The unit under test: code, ABI and optional source. Immutable once made.
class ContractBundle
{
public:
    std::string name;
    std::shared_ptr<const Program> program;
    std::vector<FunctionSig> functions;  ///< entry_offset/body_range filled where inferable
    std::optional<std::string> source;
    std::map<uint32_t, int> linemap;
    GenesisConfig genesis;
    std::shared_ptr<const Cfg> cfg;

    static ContractBundle make(std::string name, Bytes code, std::vector<FunctionSig> abi,
        std::optional<std::string> source = std::nullopt, std::map<uint32_t, int> linemap = {},
        GenesisConfig genesis = GenesisConfig::defaults());

    const FunctionSig* function(std::string_view fn_name) const noexcept
    {
        return find_function(functions, fn_name);
    }
    /// Functions that are neither properties nor the fallback.
    std::vector<const FunctionSig*> actions() const;
    std::vector<const FunctionSig*> properties() const;
};

/// Reads contract.hex, abi.json and, when present, source.sol, linemap.json and world.json.
/// Throws Error(BundleLoad) for I/O problems and Error(SchemaError) for a bad manifest.
ContractBundle load_bundle(const std::filesystem::path& dir);

GenesisConfig parse_genesis(std::string_view json_text);
std::map<uint32_t, int> parse_linemap(std::string_view json_text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace sctest::bytecode
