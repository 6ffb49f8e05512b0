// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/models/prompts.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sctest::models
{
struct LabeledSample
{
    std::string contract;  ///< decides the fold
    ForecastFeatures features;
};

/// What one engine added over a shared baseline.
struct EngineOutcome
{
    size_t new_bugs = 0;
    size_t new_instructions = 0;
};

/// 0 when concolic strictly beats the generator on (bugs, then instructions); 1 otherwise.
int label_from_outcomes(const EngineOutcome& concolic, const EngineOutcome& generator) noexcept;

/// keccak-256 of the contract name, as a 256-bit integer, modulo folds.
unsigned fold_of(std::string_view contract, unsigned folds);

/// Writes finetune.fold<k>.jsonl for k in [0, folds), one {"prompt", "label"} record per
/// line in input order. Returns the paths. Throws Error(MissingGroundTruth) before writing
/// anything when a sample has no label, Error(InvalidConfig) when folds is 0.
std::vector<std::filesystem::path> export_finetune_dataset(const std::vector<LabeledSample>& samples, unsigned folds,
    const std::filesystem::path& out_dir);

}  // namespace sctest::models
