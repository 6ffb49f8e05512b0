// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/models/prompts.hpp>
#include <sctest/suppression/suppress.hpp>

#include <json.hpp>

namespace sctest::suppression
{
namespace
{
bytecode::FunctionSig toy(std::string name, std::vector<std::pair<std::string, std::string>> params)
{
    bytecode::FunctionSig fn;
    fn.name = std::move(name);
    for (auto& [type, pname] : params)
    {
        fn.params.push_back(*bytecode::AbiType::parse(type));
        fn.param_names.push_back(pname);
    }
    return fn;
}

std::string fenced(std::string_view text)
{
    std::string out = "```\n" + std::string{text};
    if (out.back() != '\n')
        out += '\n';
    return out + "```\n";
}

std::string error_lines(const std::vector<fuzzing::CompileError>& errors)
{
    std::string out;
    for (const auto& e : errors)
        out += "  line " + std::to_string(e.line) + ", column " + std::to_string(e.col) + ": " +
               fuzzing::to_string(e.code) + " " + e.message + "\n";
    return out;
}

std::string functions_block(const std::vector<bytecode::FunctionSig>& abi)
{
    std::string out;
    for (const auto& fn : abi)
        out += "  " + models::render_signature(fn) + (fn.is_property ? "  (property)" : "") + "\n";
    return out;
}

std::string preamble()
{
    std::string out = "You repair fuzz targets for smart contracts. Fuzz targets use this format:\n";
    out += models::target_grammar();
    out += "Here are broken fuzz targets for simple contracts, the validator errors, and the corrected targets.\n";
    const auto& examples = few_shot_examples();
    for (size_t i = 0; i < examples.size(); ++i)
    {
        const auto& ex = examples[i];
        out += "Example " + std::to_string(i + 1) + ": contract " + ex.contract + " with functions\n";
        out += functions_block(ex.abi);
        out += "Broken target:\n" + fenced(ex.broken);
        out += "Errors:\n" + error_lines(fuzzing::parse_target(ex.broken, ex.abi).errors);
        out += "Corrected target:\n" + fenced(ex.fixed);
    }
    return out;
}

std::string subject(const bytecode::ContractBundle& bundle, std::string_view candidate)
{
    std::string out = "Now the contract under test. This is the source code: " +
                      (bundle.source && !bundle.source->empty() ? *bundle.source : std::string{"none"}) + "\n";
    out += "Its functions are:\n" + functions_block(bundle.functions);
    out += "Current fuzz target:\n" + fenced(candidate);
    return out;
}

/// Instructions the probe covers that the baseline does not.
size_t probe(const fuzzing::Campaign& campaign, std::shared_ptr<const bytecode::ContractBundle> bundle,
    const fuzzing::FuzzTarget& target, coverage::CoverageMap& seen)
{
    fuzzing::Campaign c{std::move(bundle), campaign.initial_world(), target, probe_seed};
    c.run(probe_execs);
    seen = campaign.coverage();
    return coverage::merge(seen, c.coverage());
}

nlohmann::ordered_json errors_json(const std::vector<fuzzing::CompileError>& errors)
{
    auto out = nlohmann::ordered_json::array();
    for (const auto& e : errors)
        out.push_back({{"code", fuzzing::to_string(e.code)}, {"line", e.line}, {"col", e.col}, {"message", e.message}});
    return out;
}
}  // namespace

const std::vector<FewShotExample>& few_shot_examples()
{
    static const std::vector<FewShotExample> examples = {
        {"Token",
            {toy("transfer", {{"address", "to"}, {"uint256", "amount"}}),
                toy("approve", {{"address", "spender"}, {"uint256", "amount"}})},
            "target token_transfer\n"
            "alias BOB = 0x00000000000000000000000000000000000000b2\n"
            "order fixed\n"
            "fuzz:\n"
            "  call transfr(BOB, ?amount:uint256=1)\n",
            "target token_transfer\n"
            "alias BOB = 0x00000000000000000000000000000000000000b2\n"
            "order fixed\n"
            "fuzz:\n"
            "  call transfer(BOB, ?amount:uint256=1)\n"},
        {"Vault",
            {toy("deposit", {{"uint256", "amount"}}), toy("withdraw", {{"uint256", "shares"}})},
            "target vault_roundtrip\n"
            "order fixed\n"
            "setup:\n"
            "  call deposit(100, 1) from OWNER\n"
            "fuzz:\n"
            "  call withdraw(?shares:uint256=10)\n",
            "target vault_roundtrip\n"
            "alias OWNER = 0x00000000000000000000000000000000000000a1\n"
            "order fixed\n"
            "setup:\n"
            "  call deposit(100) from OWNER\n"
            "fuzz:\n"
            "  call withdraw(?shares:uint256=10) from OWNER\n"},
        {"Lottery",
            {toy("enter", {{"uint8", "ticket"}}), toy("draw", {{"uint256[]", "picks"}})},
            "target lottery_draw\n"
            "order shuffle\n"
            "fuzz:\n"
            "  call enter(?ticket:uint8=300)\n"
            "  call draw(?picks:uint256[]=5)\n",
            "target lottery_draw\n"
            "order shuffle\n"
            "fuzz:\n"
            "  call enter(?ticket:uint8=3)\n"
            "  call draw(?picks:uint256[]=[5])\n"},
    };
    return examples;
}

std::string few_shot_repair_prompt(const bytecode::ContractBundle& bundle, std::string_view candidate,
    const std::vector<fuzzing::CompileError>& errors)
{
    std::string out = preamble() + subject(bundle, candidate);
    out += "The validator reported these errors:\n" + error_lines(errors);
    out += "Please fix the errors and return only the corrected fuzz target.\n";
    return out;
}

std::string few_shot_repair_prompt(const bytecode::ContractBundle& bundle, std::string_view candidate,
    const coverage::CoverageReport& report)
{
    std::string out = preamble() + subject(bundle, candidate);
    out += "The target is valid but fuzzing it covered no new code. This is the coverage report; covered lines start "
           "with '*' and the other lines are un-covered:\n";
    out += report.text;
    if (!report.text.empty() && report.text.back() != '\n')
        out += '\n';
    out += "Please change the seed values or the function invocation order so that the un-covered lines run, and "
           "return only the corrected fuzz target.\n";
    return out;
}

SuppressionRun suppress(models::ModelClient& model, const fuzzing::Campaign& campaign,
    std::shared_ptr<const bytecode::ContractBundle> bundle, std::string candidate, unsigned itr)
{
    if (itr == 0)
        throw Error(ErrorCode::InvalidConfig, "suppression needs at least one iteration");
    SuppressionRun run;
    run.stop_reason = "exhausted";
    for (unsigned i = 1; i <= itr; ++i)
    {
        auto parsed = fuzzing::parse_target(candidate, bundle->functions);
        HistoryEntry entry{i, parsed.errors, std::nullopt};
        std::string prompt;
        if (parsed.ok())
        {
            coverage::CoverageMap seen;
            entry.coverage_delta = probe(campaign, bundle, *parsed.target, seen);
            run.history.push_back(entry);
            if (*entry.coverage_delta > 0)
            {
                run.improved = true;
                run.stop_reason = "improved";
                break;
            }
            if (i < itr)
                prompt = few_shot_repair_prompt(*bundle, candidate, coverage::render_report(*bundle, seen));
        }
        else
        {
            run.history.push_back(entry);
            if (i < itr)
                prompt = few_shot_repair_prompt(*bundle, candidate, parsed.errors);
        }
        if (i == itr)
            break;
        try
        {
            ++run.model_calls;
            const auto raw = model.complete(prompt);
            try
            {
                candidate = models::extract_target_text(raw);
            }
            catch (const Error& e)
            {
                if (e.code() != ErrorCode::EmptyResponse)
                    throw;
                // an empty answer is just another broken candidate
                candidate.clear();
            }
        }
        catch (const Error& e)
        {
            run.stop_reason = std::string{"model failed: "} + e.what();
            break;
        }
    }
    run.target_text = candidate;
    auto final_parse = fuzzing::parse_target(candidate, bundle->functions);
    if (final_parse.ok())
        run.target = std::move(final_parse.target);
    return run;
}

std::string suppression_log(const std::vector<SuppressionRun>& runs)
{
    auto doc = nlohmann::ordered_json::array();
    for (const auto& r : runs)
    {
        auto history = nlohmann::ordered_json::array();
        for (const auto& h : r.history)
        {
            nlohmann::ordered_json e = {{"iteration", h.iteration}, {"errors", errors_json(h.errors)}};
            e["coverage_delta"] = h.coverage_delta ? nlohmann::ordered_json(*h.coverage_delta) : nullptr;
            history.push_back(std::move(e));
        }
        doc.push_back({{"validations", r.validations()}, {"model_calls", r.model_calls}, {"improved", r.improved},
            {"valid", r.target.has_value()}, {"stop_reason", r.stop_reason}, {"history", std::move(history)},
            {"target", r.target_text}});
    }
    return doc.dump(2) + "\n";
}

}  // namespace sctest::suppression
