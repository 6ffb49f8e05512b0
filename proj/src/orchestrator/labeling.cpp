// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/concolic/driver.hpp>
#include <sctest/orchestrator/forecast.hpp>
#include <sctest/orchestrator/generator.hpp>
#include <sctest/orchestrator/labeling.hpp>

namespace sctest::orchestrator
{
namespace
{
models::EngineOutcome measure(const fuzzing::Campaign& before, const fuzzing::Campaign& after)
{
    return {after.bugs().findings.size() - before.bugs().findings.size(),
        after.coverage().covered_count() - before.coverage().covered_count()};
}
}  // namespace

LabelOutcome label_ground_truth(std::shared_ptr<const bytecode::ContractBundle> bundle,
    const fuzzing::Campaign& baseline, models::ModelClient* model, const LabelBudget& budget)
{
    LabelOutcome out;

    fuzzing::Campaign concolic_side = baseline;
    const auto driven = concolic::drive(*bundle, baseline.initial_world(), baseline.corpus(), baseline.coverage(),
        concolic::DriveBudget{budget.solver_iterations, budget.depth});
    for (const auto& tc : driven.testcases)
        concolic_side.add_testcase(tc);
    concolic_side.run(budget.follow_up_execs);
    out.concolic = measure(baseline, concolic_side);

    fuzzing::Campaign generator_side = baseline;
    if (model)
    {
        const auto uncovered = routable_uncovered(*bundle, baseline.coverage());
        auto gen = generate_target(*model, baseline, bundle, uncovered, budget.itr);
        if (gen.target)
            generator_side.install_target(std::move(*gen.target));
    }
    generator_side.run(budget.follow_up_execs);
    out.generator = measure(baseline, generator_side);

    out.label = models::label_from_outcomes(out.concolic, out.generator);
    return out;
}

}  // namespace sctest::orchestrator
