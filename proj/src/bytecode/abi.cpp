// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/abi.hpp>
#include <sctest/bytecode/keccak.hpp>
#include <sctest/common/error.hpp>

#include <json.hpp>

namespace sctest::bytecode
{
namespace
{
bool valid_width(unsigned bits) noexcept
{
    return bits == 8 || bits == 16 || bits == 32 || bits == 64 || bits == 128 || bits == 256;
}

std::optional<unsigned> parse_uint_width(std::string_view text)
{
    if (text.substr(0, 4) != "uint" || text.size() == 4)
        return std::nullopt;
    unsigned bits = 0;
    for (char c : text.substr(4))
    {
        if (c < '0' || c > '9' || bits > 1000)
            return std::nullopt;
        bits = bits * 10 + static_cast<unsigned>(c - '0');
    }
    if (!valid_width(bits) || text[4] == '0')
        return std::nullopt;
    return bits;
}
}  // namespace

std::optional<AbiType> AbiType::parse(std::string_view text)
{
    if (text == "address")
        return address();
    if (text == "bool")
        return boolean();
    if (text == "bytes")
        return bytes();
    if (text.size() > 2 && text.substr(text.size() - 2) == "[]")
    {
        if (auto w = parse_uint_width(text.substr(0, text.size() - 2)))
            return uint_array(*w);
        return std::nullopt;
    }
    if (auto w = parse_uint_width(text))
        return uint(*w);
    return std::nullopt;
}

std::string AbiType::canonical() const
{
    switch (kind)
    {
    case Kind::uint:
        return "uint" + std::to_string(bits);
    case Kind::address:
        return "address";
    case Kind::boolean:
        return "bool";
    case Kind::bytes:
        return "bytes";
    case Kind::uint_array:
        return "uint" + std::to_string(bits) + "[]";
    }
    return "?";
}

U256 AbiType::max_value() const noexcept
{
    switch (kind)
    {
    case Kind::address:
        return low_mask(160);
    case Kind::boolean:
        return 1;
    case Kind::bytes:
        return 0xff;
    default:
        return low_mask(bits);
    }
}

std::string render_value(const AbiType& type, const AbiValue& value)
{
    switch (type.kind)
    {
    case AbiType::Kind::uint:
        return value.word.to_dec();
    case AbiType::Kind::address:
        return Address::from_word(value.word).to_hex();
    case AbiType::Kind::boolean:
        return value.word.is_zero() ? "false" : "true";
    case AbiType::Kind::bytes:
        return to_hex(value.bytes);
    case AbiType::Kind::uint_array:
    {
        std::string out = "[";
        for (size_t i = 0; i < value.items.size(); ++i)
        {
            if (i != 0)
                out += ",";
            out += value.items[i].to_dec();
        }
        return out + "]";
    }
    }
    return "?";
}

Selector selector_of(std::string_view signature) noexcept
{
    const auto h = keccak256(signature);
    return {h[0], h[1], h[2], h[3]};
}

std::string FunctionSig::signature() const
{
    std::string s = name + "(";
    for (size_t i = 0; i < params.size(); ++i)
    {
        if (i != 0)
            s += ",";
        s += params[i].canonical();
    }
    return s + ")";
}

std::string FunctionSig::declaration() const
{
    std::string s = name + "(";
    for (size_t i = 0; i < params.size(); ++i)
    {
        if (i != 0)
            s += ", ";
        s += params[i].canonical() + " " + param_names[i];
    }
    return s + ")";
}

int FunctionSig::param_index(std::string_view param_name) const noexcept
{
    for (size_t i = 0; i < param_names.size(); ++i)
        if (param_names[i] == param_name)
            return static_cast<int>(i);
    return -1;
}

std::vector<FunctionSig> parse_abi(std::string_view json_text)
{
    using nlohmann::json;
    json doc;
    try
    {
        doc = json::parse(json_text);
    }
    catch (const json::parse_error& e)
    {
        throw Error(ErrorCode::SchemaError, std::string{"$: "} + e.what());
    }
    auto fail = [](const std::string& path, const std::string& what) -> void {
        throw Error(ErrorCode::SchemaError, path + ": " + what);
    };
    if (!doc.is_object() || !doc.contains("functions"))
        fail("$", "missing field 'functions'");
    const auto& fns = doc["functions"];
    if (!fns.is_array())
        fail("$.functions", "expected array");

    std::vector<FunctionSig> out;
    for (size_t i = 0; i < fns.size(); ++i)
    {
        const std::string path = "$.functions[" + std::to_string(i) + "]";
        const auto& f = fns[i];
        if (!f.is_object())
            fail(path, "expected object");
        if (!f.contains("name") || !f["name"].is_string())
            fail(path + ".name", "missing field or not a string");
        if (!f.contains("params") || !f["params"].is_array())
            fail(path + ".params", "missing field or not an array");

        FunctionSig sig;
        sig.name = f["name"].get<std::string>();
        const auto& ps = f["params"];
        for (size_t j = 0; j < ps.size(); ++j)
        {
            const std::string ppath = path + ".params[" + std::to_string(j) + "]";
            if (!ps[j].is_string())
                fail(ppath, "expected string");
            const auto t = AbiType::parse(ps[j].get<std::string>());
            if (!t)
                fail(ppath, "unknown type '" + ps[j].get<std::string>() + "'");
            sig.params.push_back(*t);
        }
        if (f.contains("param_names"))
        {
            const auto& names = f["param_names"];
            if (!names.is_array() || names.size() != ps.size())
                fail(path + ".param_names", "expected array of " + std::to_string(ps.size()) +
                                                " strings");
            for (size_t j = 0; j < names.size(); ++j)
            {
                if (!names[j].is_string())
                    fail(path + ".param_names[" + std::to_string(j) + "]", "expected string");
                sig.param_names.push_back(names[j].get<std::string>());
            }
        }
        else
        {
            for (size_t j = 0; j < ps.size(); ++j)
                sig.param_names.push_back("p" + std::to_string(j));
        }
        if (f.contains("entry_offset"))
        {
            if (!f["entry_offset"].is_number_unsigned())
                fail(path + ".entry_offset", "expected non-negative integer");
            sig.entry_offset = f["entry_offset"].get<uint32_t>();
        }
        if (f.contains("body_range"))
        {
            const auto& r = f["body_range"];
            if (!r.is_array() || r.size() != 2 || !r[0].is_number_unsigned() ||
                !r[1].is_number_unsigned() || r[0].get<uint32_t>() > r[1].get<uint32_t>())
                fail(path + ".body_range", "expected [start, end] with start <= end");
            sig.body_range = std::pair{r[0].get<uint32_t>(), r[1].get<uint32_t>()};
        }
        if (f.contains("is_property"))
        {
            if (!f["is_property"].is_boolean())
                fail(path + ".is_property", "expected boolean");
            sig.is_property = f["is_property"].get<bool>();
        }
        else
        {
            sig.is_property = sig.name.rfind("prop_", 0) == 0;
        }
        sig.selector = selector_of(sig.signature());
        out.push_back(std::move(sig));
    }
    return out;
}

const FunctionSig* find_function(const std::vector<FunctionSig>& abi, std::string_view name) noexcept
{
    for (const auto& f : abi)
        if (f.name == name)
            return &f;
    return nullptr;
}

const FunctionSig* find_function(const std::vector<FunctionSig>& abi, const Selector& sel) noexcept
{
    for (const auto& f : abi)
        if (f.selector == sel && f.name != "fallback")
            return &f;
    return nullptr;
}

}  // namespace sctest::bytecode
