// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/concolic/driver.hpp>
#include <sctest/coverage/report.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/orchestrator/forecast.hpp>
#include <sctest/suppression/suppress.hpp>

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace sctest::orchestrator
{
struct PipelineConfig
{
    uint64_t time_budget_s = 180;
    uint64_t max_iterations = 10;  ///< solver calls per concolic route
    size_t depth = 2;
    uint64_t memory_budget_bytes = uint64_t{10} << 30;  ///< caps the snapshot cache
    unsigned itr = suppression::default_itr;
    unsigned plateau_window = 10;
    uint64_t rng_seed = 0;
    std::string model = "heuristic";  ///< heuristic | stub:<file> | http:<config file>
    std::optional<std::filesystem::path> emit_smt;

    /// Throws Error(InvalidConfig) on a zero budget, window or iteration count.
    void validate() const;
};

enum class Route : uint8_t
{
    concolic,
    generator,
    /// Generator forecast without a generator model, or no usable target from it.
    concolic_fallback,
};

const char* to_string(Route r) noexcept;

struct Decision
{
    size_t plateau = 0;  ///< 1-based
    uint64_t execs = 0;  ///< fuzzing executions when the plateau was detected
    std::vector<coverage::UncoveredFunction> uncovered;
    ForecastOutcome forecast;
    Route route = Route::concolic;
    size_t coverage_before = 0;
    size_t coverage_after = 0;  ///< at the end of the fuzzing phase that followed the route
    size_t bugs_before = 0;
    size_t bugs_after = 0;
    std::optional<concolic::DriveStats> drive;
    size_t concolic_testcases = 0;
    std::vector<size_t> suppression_runs;  ///< indices into RunReport::suppression
    std::vector<std::string> prompts;
    std::optional<std::string> installed_target;  ///< rendered .ft text
};

struct RunReport
{
    coverage::CoverageMap coverage;
    coverage::CoverageReport report;
    fuzzing::BugReport bugs;
    fuzzing::Corpus corpus;
    std::vector<Decision> decisions;
    std::vector<suppression::SuppressionRun> suppression;
    uint64_t execs = 0;
    std::string stop_reason;
};

/// Plateau test: the last `window` entries exist and are equal.
bool detect_plateau(const std::vector<size_t>& history, unsigned window);

/// Runs the full loop on `bundle`. `model` overrides cfg.model when given, so callers can
/// inspect a stub after the run.
RunReport run(std::shared_ptr<const bytecode::ContractBundle> bundle, const PipelineConfig& cfg,
    models::ModelClient* model = nullptr);

std::string decision_log_json(const RunReport& report);

/// Writes report.cov, findings.json, corpus/, decision_log.json and suppression_log.json.
void persist(const RunReport& report, const bytecode::ContractBundle& bundle, const std::filesystem::path& out_dir);

}  // namespace sctest::orchestrator
