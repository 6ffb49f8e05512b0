// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/fuzzing/campaign.hpp>
#include <sctest/models/client.hpp>
#include <sctest/models/dataset.hpp>

#include <memory>

namespace sctest::orchestrator
{
struct LabelBudget
{
    uint64_t solver_iterations = 10;
    size_t depth = 2;
    uint64_t follow_up_execs = 2 * fuzzing::iteration_execs;  ///< fuzzing after either engine
    unsigned itr = 5;
};

struct LabelOutcome
{
    int label = 1;
    models::EngineOutcome concolic;
    models::EngineOutcome generator;
};

/// Runs the concolic engine and the generator path from copies of `baseline` and compares
/// what each adds. Both get the same follow-up fuzzing budget. Without a model the
/// generator path is the baseline campaign fuzzing on unchanged.
LabelOutcome label_ground_truth(std::shared_ptr<const bytecode::ContractBundle> bundle,
    const fuzzing::Campaign& baseline, models::ModelClient* model, const LabelBudget& budget = {});

}  // namespace sctest::orchestrator
