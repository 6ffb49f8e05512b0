// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/coverage/bottleneck.hpp>
#include <sctest/fuzzing/testcase.hpp>
#include <sctest/models/client.hpp>
#include <sctest/models/prompts.hpp>

#include <string>
#include <vector>

namespace sctest::orchestrator
{
using models::Forecast;

/// Uncovered functions the pipeline can act on. Property functions are oracles evaluated
/// after each sequence, never fuzzing actions, so they are left out.
std::vector<coverage::UncoveredFunction> routable_uncovered(const bytecode::ContractBundle& bundle,
    const coverage::CoverageMap& map);

/// Loops and storage-dependent guards go to the generator; pure arithmetic and hash
/// constraints go to concolic execution.
Forecast heuristic_forecast(const std::vector<coverage::UncoveredFunction>& uncovered);

/// Source text, or a disassembly listing when the bundle has no source.
std::string contract_text(const bytecode::ContractBundle& bundle);

models::ForecastFeatures build_forecast_features(const bytecode::ContractBundle& bundle,
    const coverage::CoverageMap& map, const fuzzing::BugReport& bugs);

struct ForecastOutcome
{
    Forecast value = Forecast::Generator;
    std::string source;  ///< "heuristic", "model", or "heuristic (fallback: ...)"
    std::string raw;     ///< model answer, empty for the heuristic
};

/// Asks `model` when given, falling back to the heuristic on an unparseable answer or a
/// failed call.
ForecastOutcome forecast(models::ModelClient* model, const models::ForecastFeatures& features,
    const std::vector<coverage::UncoveredFunction>& uncovered);

}  // namespace sctest::orchestrator
