// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/coverage/bottleneck.hpp>
#include <sctest/suppression/suppress.hpp>

#include <optional>
#include <string>
#include <vector>

namespace sctest::orchestrator
{
/// Turns an answer to the value prompt into a one-call fuzz target whose mutable parameters
/// are seeded with the proposed values. Values are matched by parameter name ("amount = 2")
/// and otherwise taken in order. Returns nullopt when the answer has too few values.
std::optional<std::string> value_answer_to_target(const coverage::UncoveredFunction& fn, std::string_view answer);

struct GeneratorOutcome
{
    std::optional<fuzzing::FuzzTarget> target;  ///< validated target to install
    std::vector<suppression::SuppressionRun> runs;
    std::vector<std::string> prompts;  ///< "value:<function>" or "order"
};

/// A value prompt for each function with a storage-independent blocking constraint, and one
/// ordering prompt when any blocking constraint reads storage. Every answer goes through
/// suppress(). Clean results are merged into one target: the ordering target's setup and
/// calls followed by the value calls.
GeneratorOutcome generate_target(models::ModelClient& model, const fuzzing::Campaign& campaign,
    std::shared_ptr<const bytecode::ContractBundle> bundle, const std::vector<coverage::UncoveredFunction>& uncovered,
    unsigned itr);

}  // namespace sctest::orchestrator
