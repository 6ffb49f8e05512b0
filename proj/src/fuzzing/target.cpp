// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/fuzzing/target.hpp>

#include <sstream>

namespace sctest::fuzzing
{
std::vector<std::string> TargetCall::mutable_params() const
{
    std::vector<std::string> out;
    for (const auto& a : args)
        if (a.is_mutable)
            out.push_back(a.name);
    return out;
}

const char* to_string(CompileCode c) noexcept
{
    switch (c)
    {
    case CompileCode::E000:
        return "E000";
    case CompileCode::E001:
        return "E001";
    case CompileCode::E002:
        return "E002";
    case CompileCode::E003:
        return "E003";
    case CompileCode::E004:
        return "E004";
    case CompileCode::E005:
        return "E005";
    }
    return "E000";
}

std::string render_error(const CompileError& e)
{
    return std::string{to_string(e.code)} + " " + std::to_string(e.line) + ":" + std::to_string(e.col) + " " +
           e.message;
}

std::string render_errors(const std::vector<CompileError>& errors)
{
    std::string out;
    for (const auto& e : errors)
        out += render_error(e) + "\n";
    return out;
}

namespace
{
std::string render_call(const TargetCall& c, const std::vector<FunctionSig>& abi)
{
    const auto* fn = bytecode::find_function(abi, c.function);
    std::ostringstream out;
    out << "  call " << c.function << "(";
    for (size_t i = 0; i < c.args.size(); ++i)
    {
        if (i)
            out << ", ";
        const auto& a = c.args[i];
        const AbiType type = fn && i < fn->params.size() ? fn->params[i] : AbiType::uint();
        if (a.is_mutable)
            out << "?" << a.name << ":" << type.canonical() << "=";
        if (a.alias)
            out << *a.alias;
        else
            out << bytecode::render_value(type, a.value);
    }
    out << ")";
    if (!c.sender.empty())
        out << " from " << c.sender;
    if (!c.value.is_zero())
        out << " value " << c.value.to_dec();
    if (c.delay != 0)
        out << " delay " << c.delay;
    out << "\n";
    return out.str();
}
}  // namespace

std::string render_target(const FuzzTarget& target, const std::vector<FunctionSig>& abi)
{
    std::ostringstream out;
    out << "target " << target.name << "\n";
    for (const auto& [name, a] : target.aliases)
        out << "alias " << name << " = " << a.to_hex() << "\n";
    out << "order " << (target.order == OrderMode::shuffle ? "shuffle" : "fixed") << "\n";
    if (!target.setup.empty())
    {
        out << "setup:\n";
        for (const auto& c : target.setup)
            out << render_call(c, abi);
    }
    out << "fuzz:\n";
    for (const auto& c : target.fuzz)
        out << render_call(c, abi);
    return out.str();
}

FuzzTarget seed_initial_target(const std::vector<FunctionSig>& abi)
{
    FuzzTarget t;
    t.name = "initial";
    t.order = OrderMode::shuffle;
    for (const auto& fn : abi)
    {
        if (fn.is_property || fn.name == "fallback")
            continue;
        TargetCall c;
        c.function = fn.name;
        for (size_t i = 0; i < fn.params.size(); ++i)
        {
            CallArg a;
            a.is_mutable = true;
            a.name = i < fn.param_names.size() && !fn.param_names[i].empty() ? fn.param_names[i]
                                                                             : "arg" + std::to_string(i);
            c.args.push_back(std::move(a));
        }
        t.fuzz.push_back(std::move(c));
    }
    if (t.fuzz.empty())
        throw Error(ErrorCode::EmptyAbi, "no callable functions to seed a fuzz target from");
    return t;
}

}  // namespace sctest::fuzzing
