// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/evm/interpreter.hpp>
#include <sctest/evm/snapshot.hpp>
#include <sctest/fuzzing/testcase.hpp>

#include <json.hpp>

#include <algorithm>
#include <fstream>
#include <sstream>

namespace sctest::fuzzing
{
using nlohmann::ordered_json;

void assign_id(TestCase& tc)
{
    const auto h = evm::prefix_key(tc.txs);
    tc.id = to_hex(BytesView{h.data(), 8}, false);
}

const char* to_string(FindingKind k) noexcept
{
    return k == FindingKind::assert_failure ? "assert_failure" : "property_violation";
}

bool BugReport::add(Finding f, const TestCase& tc)
{
    for (const auto& known : findings)
        if (known.same_bug(f))
            return false;
    f.testcase_id = tc.id;
    findings.push_back(std::move(f));
    if (!testcase(tc.id))
        testcases.push_back(tc);
    return true;
}

const TestCase* BugReport::testcase(std::string_view id) const noexcept
{
    for (const auto& t : testcases)
        if (t.id == id)
            return &t;
    return nullptr;
}

namespace
{
std::string render_call(const evm::Transaction& tx, const bytecode::ContractBundle& bundle)
{
    const auto* fn = bundle.function(tx.function_call);
    std::string s = tx.function_call + "(";
    for (size_t i = 0; i < tx.args.size(); ++i)
    {
        if (i)
            s += ", ";
        s += fn && i < fn->params.size() ? bytecode::render_value(fn->params[i], tx.args[i]) : "?";
    }
    s += ") from " + tx.source.to_hex();
    if (!tx.value.is_zero())
        s += " value " + tx.value.to_dec();
    if (tx.delay)
        s += " delay " + std::to_string(tx.delay);
    return s;
}

ordered_json arg_to_json(const bytecode::AbiType& type, const AbiValue& v)
{
    switch (type.kind)
    {
    case AbiType::Kind::boolean:
        return !v.word.is_zero();
    case AbiType::Kind::uint_array:
    {
        auto a = ordered_json::array();
        for (const auto& item : v.items)
            a.push_back(item.to_dec());
        return a;
    }
    default:
        return bytecode::render_value(type, v);
    }
}

AbiValue arg_from_json(const bytecode::AbiType& type, const nlohmann::json& j, const std::string& where)
{
    auto word = [&](const nlohmann::json& x) {
        if (!x.is_string())
            throw Error(ErrorCode::SchemaError, where + ": expected a string");
        const auto v = U256::parse(x.get<std::string>());
        if (!v)
            throw Error(ErrorCode::SchemaError, where + ": bad integer");
        return *v;
    };
    switch (type.kind)
    {
    case AbiType::Kind::boolean:
        if (!j.is_boolean())
            throw Error(ErrorCode::SchemaError, where + ": expected a boolean");
        return AbiValue::of_word(U256{j.get<bool>() ? 1u : 0u});
    case AbiType::Kind::bytes:
    {
        const auto b = j.is_string() ? from_hex(j.get<std::string>()) : std::nullopt;
        if (!b)
            throw Error(ErrorCode::SchemaError, where + ": expected a hex string");
        return AbiValue::of_bytes(*b);
    }
    case AbiType::Kind::uint_array:
    {
        if (!j.is_array())
            throw Error(ErrorCode::SchemaError, where + ": expected an array");
        std::vector<U256> items;
        for (const auto& x : j)
            items.push_back(word(x));
        return AbiValue::of_items(std::move(items));
    }
    default:
        return AbiValue::of_word(word(j));
    }
}

ordered_json testcase_json(const TestCase& tc, const bytecode::ContractBundle& bundle)
{
    ordered_json j;
    j["id"] = tc.id;
    auto txs = ordered_json::array();
    for (const auto& tx : tc.txs)
    {
        const auto* fn = bundle.function(tx.function_call);
        ordered_json t;
        t["function"] = tx.function_call;
        auto args = ordered_json::array();
        for (size_t i = 0; i < tx.args.size(); ++i)
            args.push_back(fn && i < fn->params.size() ? arg_to_json(fn->params[i], tx.args[i]) : ordered_json{});
        t["args"] = args;
        t["sender"] = tx.source.to_hex();
        t["value"] = tx.value.to_dec();
        t["delay"] = tx.delay;
        txs.push_back(t);
    }
    j["txs"] = txs;
    return j;
}

TestCase testcase_of(const nlohmann::json& j, const bytecode::ContractBundle& bundle)
{
    TestCase tc;
    const auto& txs = j.at("txs");
    if (!txs.is_array())
        throw Error(ErrorCode::SchemaError, "txs: expected an array");
    for (size_t k = 0; k < txs.size(); ++k)
    {
        const auto& t = txs[k];
        const std::string where = "txs[" + std::to_string(k) + "]";
        const auto name = t.at("function").get<std::string>();
        const auto* fn = bundle.function(name);
        if (!fn)
            throw Error(ErrorCode::SchemaError, where + ": unknown function " + name);
        const auto& args = t.at("args");
        if (!args.is_array() || args.size() != fn->params.size())
            throw Error(ErrorCode::SchemaError, where + ".args: expected " + std::to_string(fn->params.size()) +
                                                    " arguments");
        std::vector<AbiValue> values;
        for (size_t i = 0; i < args.size(); ++i)
            values.push_back(arg_from_json(fn->params[i], args[i], where + ".args[" + std::to_string(i) + "]"));
        const auto sender = Address::parse(t.at("sender").get<std::string>());
        const auto value = U256::parse(t.value("value", std::string{"0"}));
        if (!sender || !value)
            throw Error(ErrorCode::SchemaError, where + ": bad sender or value");
        try
        {
            tc.txs.push_back(evm::make_tx(*fn, std::move(values), *sender, bundle.genesis.contract_address, *value,
                t.value("delay", uint64_t{0})));
        }
        catch (const Error& e)
        {
            throw Error(ErrorCode::SchemaError, where + ": " + e.what());
        }
        tc.origin.push_back(-1);
    }
    assign_id(tc);
    return tc;
}
}  // namespace

std::string render_bug_report(const BugReport& bugs, const bytecode::ContractBundle* bundle)
{
    if (bugs.findings.empty())
        return "none";
    std::ostringstream out;
    for (size_t i = 0; i < bugs.findings.size(); ++i)
    {
        const auto& f = bugs.findings[i];
        out << i + 1 << ". " << to_string(f.kind) << " in " << f.function << " at pc " << f.pc;
        if (f.line > 0)
            out << " (line " << f.line << ")";
        out << ": " << f.message << "\n";
        if (const auto* tc = bugs.testcase(f.testcase_id); tc && bundle)
            for (const auto& tx : tc->txs)
                out << "   " << render_call(tx, *bundle) << "\n";
    }
    return out.str();
}

std::string testcase_to_json(const TestCase& tc, const bytecode::ContractBundle& bundle)
{
    return testcase_json(tc, bundle).dump(1) + "\n";
}

TestCase testcase_from_json(std::string_view text, const bytecode::ContractBundle& bundle)
{
    try
    {
        return testcase_of(nlohmann::json::parse(text), bundle);
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(ErrorCode::SchemaError, std::string{"test case: "} + e.what());
    }
}

std::string findings_to_json(const BugReport& bugs, const bytecode::ContractBundle& bundle)
{
    ordered_json j;
    auto fs = ordered_json::array();
    for (const auto& f : bugs.findings)
    {
        ordered_json x;
        x["kind"] = to_string(f.kind);
        x["pc"] = f.pc;
        x["line"] = f.line;
        x["function"] = f.function;
        x["testcase_id"] = f.testcase_id;
        x["message"] = f.message;
        fs.push_back(x);
    }
    j["findings"] = fs;
    auto ts = ordered_json::array();
    for (const auto& t : bugs.testcases)
        ts.push_back(testcase_json(t, bundle));
    j["testcases"] = ts;
    return j.dump(1) + "\n";
}

BugReport findings_from_json(std::string_view text, const bytecode::ContractBundle& bundle)
{
    BugReport r;
    try
    {
        const auto j = nlohmann::json::parse(text);
        for (const auto& x : j.at("findings"))
        {
            Finding f;
            const auto kind = x.at("kind").get<std::string>();
            if (kind != "assert_failure" && kind != "property_violation")
                throw Error(ErrorCode::SchemaError, "findings: unknown kind " + kind);
            f.kind = kind == "assert_failure" ? FindingKind::assert_failure : FindingKind::property_violation;
            f.pc = x.at("pc").get<uint32_t>();
            f.line = x.value("line", 0);
            f.function = x.at("function").get<std::string>();
            f.testcase_id = x.at("testcase_id").get<std::string>();
            f.message = x.value("message", std::string{});
            r.findings.push_back(std::move(f));
        }
        for (const auto& t : j.at("testcases"))
        {
            auto tc = testcase_of(t, bundle);
            tc.id = t.at("id").get<std::string>();
            r.testcases.push_back(std::move(tc));
        }
    }
    catch (const nlohmann::json::exception& e)
    {
        throw Error(ErrorCode::SchemaError, std::string{"findings: "} + e.what());
    }
    return r;
}

void write_corpus(const Corpus& corpus, const bytecode::ContractBundle& bundle, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    for (const auto& e : corpus.entries)
    {
        std::ofstream out{dir / (e.tc.id + ".json"), std::ios::binary};
        if (!out)
            throw Error(ErrorCode::BundleLoad, "cannot write corpus entry " + e.tc.id);
        out << testcase_to_json(e.tc, bundle);
    }
}

Corpus read_corpus(const std::filesystem::path& dir, const bytecode::ContractBundle& bundle)
{
    if (!std::filesystem::is_directory(dir))
        throw Error(ErrorCode::BundleLoad, dir.string() + " is not a directory");
    std::vector<std::filesystem::path> files;
    for (const auto& f : std::filesystem::directory_iterator{dir})
        if (f.path().extension() == ".json")
            files.push_back(f.path());
    std::sort(files.begin(), files.end());
    Corpus c;
    for (const auto& f : files)
    {
        auto tc = testcase_from_json(bytecode::read_text_file(f), bundle);
        c.entries.push_back({std::move(tc), 0, 0});
    }
    return c;
}

}  // namespace sctest::fuzzing
