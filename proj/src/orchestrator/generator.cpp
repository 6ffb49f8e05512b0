// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/models/prompts.hpp>
#include <sctest/orchestrator/generator.hpp>

#include <regex>

namespace sctest::orchestrator
{
namespace
{
const std::string value_pattern = R"(\[[^\]]*\]|0x[0-9a-fA-F]+|\b\d+\b|\btrue\b|\bfalse\b)";

struct Token
{
    size_t pos;
    std::string text;
};

bool is_array(const std::string& t)
{
    return !t.empty() && t.front() == '[';
}

std::string normalize(const std::string& t)
{
    if (!is_array(t))
        return t;
    static const std::regex element{R"([^,\s\[\]]+)"};
    std::string out = "[";
    bool first = true;
    for (std::sregex_iterator it{t.begin(), t.end(), element}, end; it != end; ++it)
    {
        out += (first ? "" : ", ") + it->str();
        first = false;
    }
    return out + "]";
}

bool fits(const bytecode::AbiType& type, const std::string& token)
{
    return (type.kind == bytecode::AbiType::Kind::uint_array) == is_array(token);
}

std::string escape(const std::string& s)
{
    static const std::regex special{R"([.^$|()\[\]{}*+?\\])"};
    return std::regex_replace(s, special, R"(\$&)");
}

std::string answer_text(const std::string& raw)
{
    try
    {
        return models::extract_target_text(raw);
    }
    catch (const Error& e)
    {
        if (e.code() != ErrorCode::EmptyResponse)
            throw;
        return {};
    }
}
}  // namespace

std::optional<std::string> value_answer_to_target(const coverage::UncoveredFunction& fn, std::string_view answer)
{
    const std::string text{answer};
    const std::regex value_re{value_pattern};
    std::vector<Token> tokens;
    for (std::sregex_iterator it{text.begin(), text.end(), value_re}, end; it != end; ++it)
        tokens.push_back({static_cast<size_t>(it->position()), it->str()});

    const auto& sig = fn.sig;
    std::vector<std::string> values(sig.params.size());
    for (size_t i = 0; i < sig.params.size() && i < sig.param_names.size(); ++i)
    {
        if (sig.param_names[i].empty())
            continue;
        const std::regex named{"\\b" + escape(sig.param_names[i]) + R"(\b\s*(?:=|:|is)\s*()" + value_pattern + ")"};
        std::smatch m;
        if (std::regex_search(text, m, named) && fits(sig.params[i], m[1].str()))
            values[i] = m[1].str();
    }
    // parameters without a named value take the next fitting token in order
    size_t cursor = 0;
    for (size_t i = 0; i < values.size(); ++i)
    {
        if (!values[i].empty())
            continue;
        while (cursor < tokens.size() && !fits(sig.params[i], tokens[cursor].text))
            ++cursor;
        if (cursor == tokens.size())
            return std::nullopt;
        values[i] = tokens[cursor++].text;
    }

    std::string out = "target value_" + sig.name + "\norder fixed\nfuzz:\n  call " + sig.name + "(";
    for (size_t i = 0; i < values.size(); ++i)
    {
        const std::string name = i < sig.param_names.size() && !sig.param_names[i].empty()
                                     ? sig.param_names[i]
                                     : "arg" + std::to_string(i);
        out += (i ? ", " : "") + std::string{"?"} + name + ":" + sig.params[i].canonical() + "=" + normalize(values[i]);
    }
    return out + ")\n";
}

GeneratorOutcome generate_target(models::ModelClient& model, const fuzzing::Campaign& campaign,
    std::shared_ptr<const bytecode::ContractBundle> bundle, const std::vector<coverage::UncoveredFunction>& uncovered,
    unsigned itr)
{
    GeneratorOutcome out;
    std::vector<fuzzing::FuzzTarget> value_targets;
    std::optional<fuzzing::FuzzTarget> order_target;
    bool storage = false;

    auto ask = [&](const std::string& prompt) -> std::optional<std::string> {
        try
        {
            return model.complete(prompt);
        }
        catch (const Error& e)
        {
            if (e.code() != ErrorCode::ModelError)
                throw;
            return std::nullopt;
        }
    };

    for (const auto& u : uncovered)
    {
        const bool needs_values = std::any_of(u.blocking.begin(), u.blocking.end(),
            [](const auto& b) { return !b.features.storage_dependent; });
        storage = storage || std::any_of(u.blocking.begin(), u.blocking.end(),
                                 [](const auto& b) { return b.features.storage_dependent; });
        if (!needs_values)
            continue;
        out.prompts.push_back("value:" + u.sig.name);
        const auto raw = ask(models::build_generator_value_prompt(u, models::function_text(*bundle, u.sig)));
        if (!raw)
            continue;
        const auto candidate = value_answer_to_target(u, answer_text(*raw)).value_or(answer_text(*raw));
        out.runs.push_back(suppression::suppress(model, campaign, bundle, candidate, itr));
        if (out.runs.back().target)
            value_targets.push_back(*out.runs.back().target);
    }
    if (storage)
    {
        out.prompts.push_back("order");
        if (const auto raw = ask(models::build_generator_order_prompt(*bundle, uncovered)))
        {
            out.runs.push_back(suppression::suppress(model, campaign, bundle, answer_text(*raw), itr));
            order_target = out.runs.back().target;
        }
    }

    if (!order_target && value_targets.empty())
        return out;
    fuzzing::FuzzTarget merged = order_target ? *order_target : value_targets.front();
    for (size_t i = order_target ? 0 : 1; i < value_targets.size(); ++i)
    {
        const auto& v = value_targets[i];
        merged.aliases.insert(v.aliases.begin(), v.aliases.end());
        merged.fuzz.insert(merged.fuzz.end(), v.fuzz.begin(), v.fuzz.end());
    }
    out.target = std::move(merged);
    return out;
}

}  // namespace sctest::orchestrator
