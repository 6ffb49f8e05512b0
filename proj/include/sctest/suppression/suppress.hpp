// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/coverage/report.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/fuzzing/target.hpp>
#include <sctest/models/client.hpp>

#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace sctest::suppression
{
inline constexpr unsigned default_itr = 30;
inline constexpr uint64_t probe_execs = fuzzing::iteration_execs;
inline constexpr uint64_t probe_seed = 0x5eedf00d;

struct HistoryEntry
{
    unsigned iteration = 0;  ///< 1-based
    std::vector<fuzzing::CompileError> errors;
    /// New instructions the probe campaign found over the baseline; set only for clean entries.
    std::optional<size_t> coverage_delta;
};

struct SuppressionRun
{
    std::string target_text;                 ///< the returned candidate
    std::optional<fuzzing::FuzzTarget> target;  ///< set when target_text validates
    std::vector<HistoryEntry> history;       ///< one entry per validation
    bool improved = false;
    size_t model_calls = 0;
    std::string stop_reason;  ///< "improved", "exhausted" or the model failure

    size_t validations() const noexcept { return history.size(); }
};

/// Validate-and-repair loop over a model-written fuzz target. Each iteration validates the
/// current candidate; errors go back to the model with few-shot repair examples, a clean
/// candidate runs a probe campaign from `campaign`'s initial world and is returned as soon as
/// it covers an instruction the campaign has not. Clean but unhelpful candidates are sent back
/// with the coverage report. At most `itr` validations; the last candidate is returned when
/// they run out or the model fails.
SuppressionRun suppress(models::ModelClient& model, const fuzzing::Campaign& campaign,
    std::shared_ptr<const bytecode::ContractBundle> bundle, std::string candidate, unsigned itr = default_itr);

struct FewShotExample
{
    std::string contract;
    std::vector<bytecode::FunctionSig> abi;
    std::string broken;
    std::string fixed;
};

const std::vector<FewShotExample>& few_shot_examples();

std::string few_shot_repair_prompt(const bytecode::ContractBundle& bundle, std::string_view candidate,
    const std::vector<fuzzing::CompileError>& errors);

/// Coverage-feedback variant for candidates that validate but do not improve coverage.
std::string few_shot_repair_prompt(const bytecode::ContractBundle& bundle, std::string_view candidate,
    const coverage::CoverageReport& report);

/// JSON document for suppression_log.json; one element per suppress call, in order.
std::string suppression_log(const std::vector<SuppressionRun>& runs);

}  // namespace sctest::suppression
