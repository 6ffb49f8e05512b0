// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/orchestrator/generator.hpp>
#include <sctest/orchestrator/pipeline.hpp>

#include <chrono>

namespace sctest::orchestrator
{
void PipelineConfig::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw Error(ErrorCode::InvalidConfig, std::string{what} + " must be positive");
    };
    require(time_budget_s > 0, "time budget");
    require(max_iterations > 0, "max iterations");
    require(depth > 0, "depth");
    require(memory_budget_bytes > 0, "memory budget");
    require(itr > 0, "itr");
    require(plateau_window > 0, "plateau window");
}

const char* to_string(Route r) noexcept
{
    switch (r)
    {
    case Route::concolic:
        return "concolic";
    case Route::generator:
        return "generator";
    case Route::concolic_fallback:
        return "concolic (generator unavailable)";
    }
    return "?";
}

bool detect_plateau(const std::vector<size_t>& history, unsigned window)
{
    if (window == 0 || history.size() < window)
        return false;
    const auto tail = history.end() - window;
    return std::all_of(tail, history.end(), [&](size_t v) { return v == *tail; });
}

RunReport run(std::shared_ptr<const bytecode::ContractBundle> bundle, const PipelineConfig& cfg,
    models::ModelClient* model)
{
    cfg.validate();
    std::unique_ptr<models::ModelClient> owned;
    if (!model)
    {
        owned = models::make_client(cfg.model);
        model = owned.get();
    }
    using clock = std::chrono::steady_clock;
    const auto deadline = clock::now() + std::chrono::seconds{cfg.time_budget_s};

    const auto world = evm::genesis_world(bundle);
    fuzzing::Campaign campaign{bundle, world, fuzzing::seed_initial_target(bundle->functions), cfg.rng_seed};
    concolic::PreimageTable preimages;
    RunReport rep;

    for (;;)
    {
        std::vector<size_t> phase{campaign.coverage().covered_count()};
        bool timed_out = false;
        while (!detect_plateau(phase, cfg.plateau_window))
        {
            if (clock::now() >= deadline)
            {
                timed_out = true;
                break;
            }
            campaign.run(fuzzing::iteration_execs, deadline);
            phase.push_back(campaign.coverage().covered_count());
        }

        Decision* last = rep.decisions.empty() ? nullptr : &rep.decisions.back();
        if (last)
        {
            last->coverage_after = campaign.coverage().covered_count();
            last->bugs_after = campaign.bugs().findings.size();
        }
        if (timed_out)
        {
            rep.stop_reason = "time budget exhausted";
            break;
        }
        auto uncovered = routable_uncovered(*bundle, campaign.coverage());
        if (uncovered.empty())
        {
            rep.stop_reason = "no uncovered functions";
            break;
        }
        if (last && last->route != Route::generator)
        {
            rep.stop_reason = "plateau after a concolic route";
            break;
        }
        if (last && last->coverage_after == last->coverage_before && last->bugs_after == last->bugs_before)
        {
            rep.stop_reason = "plateau after a generator route without progress";
            break;
        }

        Decision d;
        d.plateau = rep.decisions.size() + 1;
        d.execs = campaign.execs();
        d.coverage_before = campaign.coverage().covered_count();
        d.bugs_before = campaign.bugs().findings.size();
        d.forecast = forecast(model, build_forecast_features(*bundle, campaign.coverage(), campaign.bugs()), uncovered);
        d.route = d.forecast.value == Forecast::Concolic ? Route::concolic : Route::concolic_fallback;

        if (d.forecast.value == Forecast::Generator && model)
        {
            auto gen = generate_target(*model, campaign, bundle, uncovered, cfg.itr);
            d.prompts = gen.prompts;
            for (auto& r : gen.runs)
            {
                d.suppression_runs.push_back(rep.suppression.size());
                rep.suppression.push_back(std::move(r));
            }
            if (gen.target)
            {
                d.route = Route::generator;
                d.installed_target = fuzzing::render_target(*gen.target, bundle->functions);
                campaign.install_target(std::move(*gen.target));
            }
        }
        if (d.route != Route::generator)
        {
            concolic::DriveOptions opts;
            opts.snapshot_budget_bytes = cfg.memory_budget_bytes;
            opts.emit_smt = cfg.emit_smt;
            opts.preimages = &preimages;
            const auto driven = concolic::drive(*bundle, world, campaign.corpus(), campaign.coverage(),
                concolic::DriveBudget{cfg.max_iterations, cfg.depth}, opts);
            d.drive = driven.stats;
            d.concolic_testcases = driven.testcases.size();
            for (const auto& tc : driven.testcases)
                campaign.add_testcase(tc);
        }
        d.uncovered = std::move(uncovered);
        rep.decisions.push_back(std::move(d));
    }

    rep.coverage = campaign.coverage();
    rep.report = coverage::render_report(*bundle, rep.coverage);
    rep.bugs = campaign.bugs();
    rep.corpus = campaign.corpus();
    rep.execs = campaign.execs();
    return rep;
}

}  // namespace sctest::orchestrator
