// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/cfg.hpp>
#include <sctest/common/error.hpp>
#include <sctest/models/prompts.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace sctest::models
{
namespace
{
std::string slot(std::string_view value)
{
    std::string_view v = value;
    while (!v.empty() && std::isspace(static_cast<unsigned char>(v.back())))
        v.remove_suffix(1);
    return v.empty() ? std::string{"none"} : std::string{v};
}

std::string forecast_context(const ForecastFeatures& f)
{
    std::string out;
    out += "This is the source code: " + slot(f.source) + ".\n";
    out += "After fuzzing the above source code, the coverage is " + slot(f.coverage_report) +
           " and detected bugs are " + slot(f.bug_report) + ". From the coverage report, the un-covered functions are " +
           slot(f.uncovered_functions) + ". Please understand the un-covered functions.\n";
    out += "Let concolic execution be 0 and foundation model be 1. Given the source code and un-covered functions "
           "above, the best way to improve coverage and find more bugs is:";
    return out;
}

bool standalone(std::string_view text, size_t i)
{
    const auto word = [](char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.'; };
    const bool left = i == 0 || !word(text[i - 1]);
    const bool right = i + 1 >= text.size() || !word(text[i + 1]) ||
                       (text[i + 1] == '.' && (i + 2 >= text.size() || !word(text[i + 2])));
    return left && right;
}
}  // namespace

const char* to_string(Forecast f) noexcept
{
    return f == Forecast::Concolic ? "concolic" : "generator";
}

std::string build_forecast_training_sample(const ForecastFeatures& f)
{
    if (!f.ground_truth)
        throw Error(ErrorCode::MissingGroundTruth, "training samples need a ground truth");
    if (*f.ground_truth != 0 && *f.ground_truth != 1)
        throw Error(ErrorCode::MissingGroundTruth, "ground truth must be 0 or 1");
    return forecast_context(f) + " " + std::to_string(*f.ground_truth) + "\n" + std::string{end_of_text};
}

std::string build_forecast_inference_prompt(const ForecastFeatures& f)
{
    if (f.ground_truth)
        throw Error(ErrorCode::UnexpectedGroundTruth, "inference prompts carry no ground truth");
    return forecast_context(f) + "\n" + std::string{forecast_instruction} + ".";
}

ForecastDecision parse_forecast(std::string_view raw)
{
    for (size_t i = raw.size(); i-- > 0;)
    {
        if ((raw[i] == '0' || raw[i] == '1') && standalone(raw, i))
            return {raw[i] == '0' ? Forecast::Concolic : Forecast::Generator, std::string{raw}};
    }
    throw Error(ErrorCode::Unparseable, "forecast response has no standalone 0 or 1");
}

std::string render_signature(const bytecode::FunctionSig& fn)
{
    std::string out = fn.name + "(";
    for (size_t i = 0; i < fn.params.size(); ++i)
    {
        if (i)
            out += ", ";
        out += fn.params[i].canonical();
        if (i < fn.param_names.size() && !fn.param_names[i].empty())
            out += " " + fn.param_names[i];
    }
    return out + ")";
}

std::string function_text(const bytecode::ContractBundle& bundle, const bytecode::FunctionSig& fn)
{
    if (!bundle.source)
        return render_signature(fn);
    const std::string& src = *bundle.source;
    const auto at = src.find("function " + fn.name + "(");
    if (at == std::string::npos)
        return render_signature(fn);
    const auto open = src.find('{', at);
    if (open == std::string::npos)
        return render_signature(fn);
    int depth = 0;
    size_t end = open;
    for (; end < src.size(); ++end)
    {
        if (src[end] == '{')
            ++depth;
        else if (src[end] == '}' && --depth == 0)
            break;
    }
    if (end >= src.size())
        return render_signature(fn);
    size_t begin = src.rfind('\n', at);
    begin = begin == std::string::npos ? 0 : begin + 1;
    return src.substr(begin, end + 1 - begin);
}

std::string build_generator_value_prompt(const coverage::UncoveredFunction& fn, std::string_view text)
{
    if (fn.blocking.empty())
        throw Error(ErrorCode::NoBlockingConstraint, "function " + fn.sig.name + " has no blocking constraint");
    std::string constraints;
    for (const auto& b : fn.blocking)
        constraints += (constraints.empty() ? "" : "; ") + b.constraint_text;
    std::string params;
    for (size_t i = 0; i < fn.sig.params.size(); ++i)
    {
        const bool named = i < fn.sig.param_names.size() && !fn.sig.param_names[i].empty();
        params += (i ? ", " : "") + (named ? fn.sig.param_names[i] : "arg" + std::to_string(i));
    }
    const std::string function = text.empty() ? render_signature(fn.sig) : std::string{text};
    std::string out;
    out += "After fuzzing, this is the un-covered function in a smart contract: " + function + ".\n";
    out += "The function is un-covered due to the restrictive condition " + constraints + ".\n";
    out += "Please fine valid " + params + " that can pass the previous given restrictive condition " + constraints +
           ". Please return the values of each " + params + " only.\n";
    return out;
}

std::vector<std::string> state_setter_candidates(const bytecode::ContractBundle& bundle,
    const std::vector<coverage::UncoveredFunction>& uncovered)
{
    std::set<std::string> targets;
    for (const auto& u : uncovered)
        targets.insert(u.sig.name);
    std::vector<std::string> out;
    const auto& ins = bundle.program->instructions();
    for (const auto& fn : bundle.functions)
    {
        if (fn.is_property || targets.count(fn.name))
            continue;
        bool writes = false;
        for (const auto b : bytecode::body_blocks(*bundle.cfg, fn))
        {
            const auto& block = bundle.cfg->blocks[b];
            for (uint32_t i = block.first; i <= block.last && !writes; ++i)
                writes = ins[i].op == bytecode::Op::SSTORE;
        }
        if (writes)
            out.push_back(fn.name);
    }
    return out;
}

std::string_view target_grammar() noexcept
{
    return "target <name>\n"
           "alias <NAME> = <0x-address>            (zero or more)\n"
           "order fixed | shuffle\n"
           "setup:                                 (optional; runs once, in order)\n"
           "  call <function>(<arg>, ...) [from <NAME>] [value <n>] [delay <seconds>]\n"
           "fuzz:\n"
           "  call <function>(<arg>, ...) [from <NAME>] [value <n>] [delay <seconds>]\n"
           "<arg> is a number, an alias NAME, an array [a, b, ...], a 0x-hex bytes literal,\n"
           "or a mutable parameter ?<param name>:<abi type>=<seed value>.\n";
}

std::string build_generator_order_prompt(const bytecode::ContractBundle& bundle,
    const std::vector<coverage::UncoveredFunction>& uncovered)
{
    std::string out;
    out += "This is the source code of a smart contract: " + slot(bundle.source.value_or("")) + ".\n";
    out += "Its functions are:\n";
    for (const auto& fn : bundle.functions)
        out += "  " + render_signature(fn) + (fn.is_property ? "  (property)" : "") + "\n";
    out += "After fuzzing, these functions are not fully covered:\n";
    for (const auto& u : uncovered)
    {
        out += "  " + render_signature(u.sig) + "\n";
        for (const auto& b : u.blocking)
        {
            if (!b.features.storage_dependent)
                continue;
            out += "    blocked by " + b.constraint_text;
            if (b.line > 0)
                out += " at line " + std::to_string(b.line);
            out += ", which depends on contract storage\n";
        }
    }
    const auto setters = state_setter_candidates(bundle, uncovered);
    out += "Functions that write storage and may set up the required state: ";
    if (setters.empty())
        out += "none";
    for (size_t i = 0; i < setters.size(); ++i)
        out += (i ? ", " : "") + setters[i];
    out += ".\n";
    out += "Fuzz targets use this format:\n" + std::string{target_grammar()};
    out += "Please write a fuzz target whose setup calls, in a specific invocation order, put the contract in a state "
           "where the blocked branches can run, and whose fuzz calls exercise the un-covered functions. Please return "
           "the fuzz target only.\n";
    return out;
}

std::string extract_target_text(std::string_view raw)
{
    const auto fence = raw.find("```");
    if (fence != std::string_view::npos)
    {
        const auto body = raw.find('\n', fence);
        if (body != std::string_view::npos)
        {
            const auto close = raw.find("```", body + 1);
            const auto block = raw.substr(body + 1, close == std::string_view::npos ? std::string_view::npos
                                                                                    : close - body - 1);
            if (!block.empty())
                return std::string{block};
        }
    }
    size_t a = 0, b = raw.size();
    while (a < b && std::isspace(static_cast<unsigned char>(raw[a])))
        ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(raw[b - 1])))
        --b;
    if (a == b)
        throw Error(ErrorCode::EmptyResponse, "model returned no text");
    return std::string{raw.substr(a, b - a)};
}

}  // namespace sctest::models
