// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/instruction.hpp>
#include <sctest/common/error.hpp>
#include <sctest/coverage/report.hpp>
#include <sctest/orchestrator/forecast.hpp>

namespace sctest::orchestrator
{
std::vector<coverage::UncoveredFunction> routable_uncovered(const bytecode::ContractBundle& bundle,
    const coverage::CoverageMap& map)
{
    auto out = coverage::extract_uncovered_functions(bundle, map);
    std::erase_if(out, [](const coverage::UncoveredFunction& u) { return u.sig.is_property; });
    return out;
}

Forecast heuristic_forecast(const std::vector<coverage::UncoveredFunction>& uncovered)
{
    if (uncovered.empty())
        throw Error(ErrorCode::EmptyInput, "no uncovered functions to forecast for");
    for (const auto& u : uncovered)
        for (const auto& b : u.blocking)
            if (b.features.loop_guarded || b.features.storage_dependent)
                return Forecast::Generator;
    return Forecast::Concolic;
}

std::string contract_text(const bytecode::ContractBundle& bundle)
{
    if (bundle.source && !bundle.source->empty())
        return *bundle.source;
    std::string out;
    for (const auto& ins : bundle.program->instructions())
        out += bytecode::disassemble_line(ins) + "\n";
    return out;
}

models::ForecastFeatures build_forecast_features(const bytecode::ContractBundle& bundle,
    const coverage::CoverageMap& map, const fuzzing::BugReport& bugs)
{
    models::ForecastFeatures f;
    f.source = contract_text(bundle);
    f.coverage_report = coverage::render_report(bundle, map).text;
    f.bug_report = fuzzing::render_bug_report(bugs, &bundle);
    f.uncovered_functions = coverage::render_uncovered(routable_uncovered(bundle, map));
    return f;
}

ForecastOutcome forecast(models::ModelClient* model, const models::ForecastFeatures& features,
    const std::vector<coverage::UncoveredFunction>& uncovered)
{
    if (!model)
        return {heuristic_forecast(uncovered), "heuristic", {}};
    std::string raw;
    try
    {
        raw = model->complete(models::build_forecast_inference_prompt(features));
        const auto d = models::parse_forecast(raw);
        return {d.value, "model", raw};
    }
    catch (const Error& e)
    {
        if (e.code() != ErrorCode::Unparseable && e.code() != ErrorCode::ModelError)
            throw;
        return {heuristic_forecast(uncovered), std::string{"heuristic (fallback: "} + to_string(e.code()) + ")", raw};
    }
}

}  // namespace sctest::orchestrator
