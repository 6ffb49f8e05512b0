// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/bundle.hpp>
#include <sctest/common/error.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

namespace sctest::bytecode
{
GenesisConfig GenesisConfig::defaults()
{
    GenesisConfig g;
    g.accounts.push_back({*Address::parse("0xa1"), *U256::parse("100000000000000000000")});
    g.contract_address = *Address::parse("0xc0");
    return g;
}

ContractBundle ContractBundle::make(std::string name, Bytes code, std::vector<FunctionSig> abi,
    std::optional<std::string> source, std::map<uint32_t, int> linemap, GenesisConfig genesis)
{
    ContractBundle b;
    b.name = std::move(name);
    auto program = std::make_shared<const Program>(std::move(code));
    b.cfg = std::make_shared<const Cfg>(build_cfg(*program, abi));
    b.program = std::move(program);
    b.functions = std::move(abi);
    b.source = std::move(source);
    b.linemap = std::move(linemap);
    b.genesis = std::move(genesis);
    return b;
}

std::vector<const FunctionSig*> ContractBundle::actions() const
{
    std::vector<const FunctionSig*> out;
    for (const auto& f : functions)
        if (!f.is_property && f.name != "fallback")
            out.push_back(&f);
    return out;
}

std::vector<const FunctionSig*> ContractBundle::properties() const
{
    std::vector<const FunctionSig*> out;
    for (const auto& f : functions)
        if (f.is_property)
            out.push_back(&f);
    return out;
}

std::string read_text_file(const std::filesystem::path& path)
{
    std::ifstream in{path, std::ios::binary};
    if (!in)
        throw Error(ErrorCode::BundleLoad, "cannot read " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

GenesisConfig parse_genesis(std::string_view json_text)
{
    using nlohmann::json;
    GenesisConfig g = GenesisConfig::defaults();
    json doc;
    try
    {
        doc = json::parse(json_text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorCode::SchemaError, std::string{"world.json: "} + e.what());
    }
    auto word = [](const json& v, const std::string& path) {
        std::optional<U256> r;
        if (v.is_string())
            r = U256::parse(v.get<std::string>());
        else if (v.is_number_unsigned())
            r = U256{v.get<uint64_t>()};
        if (!r)
            throw Error(ErrorCode::SchemaError, "world.json " + path + ": expected integer");
        return *r;
    };
    auto addr = [](const json& v, const std::string& path) {
        std::optional<Address> a;
        if (v.is_string())
            a = Address::parse(v.get<std::string>());
        if (!a)
            throw Error(ErrorCode::SchemaError, "world.json " + path + ": expected 0x address");
        return *a;
    };
    if (doc.contains("accounts"))
    {
        g.accounts.clear();
        const auto& accs = doc["accounts"];
        for (size_t i = 0; i < accs.size(); ++i)
        {
            const std::string path = "$.accounts[" + std::to_string(i) + "]";
            g.accounts.push_back({addr(accs[i].value("address", json{}), path + ".address"),
                accs[i].contains("balance") ? word(accs[i]["balance"], path + ".balance") : U256{}});
        }
    }
    if (doc.contains("contract_address"))
        g.contract_address = addr(doc["contract_address"], "$.contract_address");
    if (doc.contains("timestamp"))
        g.timestamp = word(doc["timestamp"], "$.timestamp").low64();
    if (doc.contains("storage"))
    {
        for (const auto& [k, v] : doc["storage"].items())
        {
            const auto slot = U256::parse(k);
            if (!slot)
                throw Error(ErrorCode::SchemaError, "world.json $.storage." + k + ": expected integer slot");
            g.storage[*slot] = word(v, "$.storage." + k);
        }
    }
    return g;
}

std::map<uint32_t, int> parse_linemap(std::string_view json_text)
{
    using nlohmann::json;
    std::map<uint32_t, int> out;
    json doc;
    try
    {
        doc = json::parse(json_text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorCode::SchemaError, std::string{"linemap.json: "} + e.what());
    }
    for (const auto& [k, v] : doc.items())
    {
        if (!v.is_number_integer())
            throw Error(ErrorCode::SchemaError, "linemap.json $." + k + ": expected integer line");
        out[static_cast<uint32_t>(std::stoul(k))] = v.get<int>();
    }
    return out;
}

ContractBundle load_bundle(const std::filesystem::path& dir)
{
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir))
        throw Error(ErrorCode::BundleLoad, dir.string() + " is not a directory");
    const auto code = from_hex(read_text_file(dir / "contract.hex"));
    if (!code)
        throw Error(ErrorCode::BundleLoad, "contract.hex is not valid hex");
    auto abi = parse_abi(read_text_file(dir / "abi.json"));
    std::optional<std::string> source;
    if (fs::exists(dir / "source.sol"))
        source = read_text_file(dir / "source.sol");
    std::map<uint32_t, int> linemap;
    if (fs::exists(dir / "linemap.json"))
        linemap = parse_linemap(read_text_file(dir / "linemap.json"));
    GenesisConfig genesis = GenesisConfig::defaults();
    if (fs::exists(dir / "world.json"))
        genesis = parse_genesis(read_text_file(dir / "world.json"));
    std::string name = fs::absolute(dir).lexically_normal().filename().string();
    if (name.empty())
        name = fs::absolute(dir).lexically_normal().parent_path().filename().string();
    return ContractBundle::make(std::move(name), std::move(*code), std::move(abi),
        std::move(source), std::move(linemap), std::move(genesis));
}

}  // namespace sctest::bytecode
