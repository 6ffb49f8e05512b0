// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/coverage/bottleneck.hpp>

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sctest::models
{
/// Inputs of the forecast model. Empty slots render as "none".
struct ForecastFeatures
{
    std::string source;
    std::string coverage_report;
    std::string bug_report;
    std::string uncovered_functions;
    std::optional<int> ground_truth;  ///< 0 or 1; training samples only

    friend bool operator==(const ForecastFeatures&, const ForecastFeatures&) = default;
};

enum class Forecast : uint8_t
{
    Concolic = 0,
    Generator = 1,
};

const char* to_string(Forecast f) noexcept;

struct ForecastDecision
{
    Forecast value = Forecast::Generator;
    std::string raw;
};

inline constexpr std::string_view end_of_text = "<End of Text>";
inline constexpr std::string_view forecast_instruction = "Please generate 0 or 1 only";

/// Throws Error(MissingGroundTruth) without a ground truth.
std::string build_forecast_training_sample(const ForecastFeatures& f);
/// Throws Error(UnexpectedGroundTruth) when a ground truth is present.
std::string build_forecast_inference_prompt(const ForecastFeatures& f);

/// The last standalone "0" or "1" in raw decides. Throws Error(Unparseable) when neither occurs.
ForecastDecision parse_forecast(std::string_view raw);

/// "name(type a, type b)"
std::string render_signature(const bytecode::FunctionSig& fn);

/// Source text of fn when the bundle carries source, else its signature.
std::string function_text(const bytecode::ContractBundle& bundle, const bytecode::FunctionSig& fn);

/// Asks for argument values passing fn's blocking constraints ("; "-joined). `text`
/// replaces the rendered signature when given. Throws Error(NoBlockingConstraint).
std::string build_generator_value_prompt(const coverage::UncoveredFunction& fn, std::string_view text = {});

/// Functions other than the uncovered ones whose bodies write storage.
std::vector<std::string> state_setter_candidates(const bytecode::ContractBundle& bundle,
    const std::vector<coverage::UncoveredFunction>& uncovered);

/// Asks for a complete fuzz target whose setup calls establish the state the uncovered
/// branches need.
std::string build_generator_order_prompt(const bytecode::ContractBundle& bundle,
    const std::vector<coverage::UncoveredFunction>& uncovered);

/// Summary of the fuzz-target language shown to the model.
std::string_view target_grammar() noexcept;

/// First fenced code block, else the trimmed response. Throws Error(EmptyResponse).
std::string extract_target_text(std::string_view raw);

}  // namespace sctest::models
