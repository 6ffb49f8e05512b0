// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/bundle.hpp>
#include <sctest/common/error.hpp>
#include <sctest/fuzzing/target.hpp>
#include <sctest/models/dataset.hpp>
#include <sctest/orchestrator/labeling.hpp>
#include <sctest/orchestrator/pipeline.hpp>

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace sctest;

namespace
{
std::shared_ptr<const bytecode::ContractBundle> load(const std::string& dir)
{
    return std::make_shared<const bytecode::ContractBundle>(bytecode::load_bundle(dir));
}

int cmd_run(const std::string& bundle_dir, const orchestrator::PipelineConfig& cfg, const std::string& out)
{
    const auto bundle = load(bundle_dir);
    const auto report = orchestrator::run(bundle, cfg);
    orchestrator::persist(report, *bundle, out);
    const auto& s = report.report.summary;
    std::cout << "coverage " << s.instructions_covered << "/" << s.instructions_total << " instructions, "
              << report.bugs.findings.size() << " finding(s), " << report.decisions.size() << " decision(s), "
              << report.execs << " execs\n";
    for (const auto& d : report.decisions)
        std::cout << "plateau " << d.plateau << ": forecast " << static_cast<int>(d.forecast.value) << " ("
                  << d.forecast.source << "), route " << orchestrator::to_string(d.route) << ", coverage "
                  << d.coverage_before << " -> " << d.coverage_after << "\n";
    std::cout << "stopped: " << report.stop_reason << "\n";
    if (!report.bugs.findings.empty())
        std::cout << fuzzing::render_bug_report(report.bugs, bundle.get());
    std::cout << "outputs written to " << out << "\n";
    return 0;
}

int cmd_replay(const std::string& bundle_dir, const std::string& corpus_dir)
{
    const auto bundle = load(bundle_dir);
    const auto corpus = fuzzing::read_corpus(corpus_dir, *bundle);
    const auto r = fuzzing::replay(*bundle, evm::genesis_world(bundle), corpus);
    const auto report = coverage::render_report(*bundle, r.coverage);
    std::cout << "replayed " << corpus.entries.size() << " test case(s): " << report.summary.instructions_covered
              << "/" << report.summary.instructions_total << " instructions, " << r.bugs.findings.size()
              << " finding(s)\n";
    for (const auto& id : r.stale)
        std::cout << "stale: " << id << "\n";
    if (!r.bugs.findings.empty())
        std::cout << fuzzing::render_bug_report(r.bugs, bundle.get());
    return r.stale.empty() ? 0 : 1;
}

int cmd_validate(const std::string& target_file, const std::string& bundle_dir)
{
    const auto bundle = load(bundle_dir);
    std::ifstream in{target_file, std::ios::binary};
    if (!in)
        throw Error(ErrorCode::InvalidConfig, "cannot read " + target_file);
    std::ostringstream text;
    text << in.rdbuf();
    const auto r = fuzzing::parse_target(text.str(), bundle->functions);
    if (!r.ok())
    {
        std::cout << fuzzing::render_errors(r.errors);
        return 1;
    }
    std::cout << "ok\n";
    return 0;
}

int cmd_dataset(const std::string& root, unsigned folds, const std::string& out, const std::string& model_spec,
    uint64_t seed, unsigned window, uint64_t max_fuzz_iterations)
{
    std::vector<fs::path> dirs;
    for (const auto& entry : fs::directory_iterator{root})
        if (entry.is_directory())
            dirs.push_back(entry.path());
    std::sort(dirs.begin(), dirs.end());
    auto model = models::make_client(model_spec);

    std::vector<models::LabeledSample> samples;
    for (const auto& dir : dirs)
    {
        const auto bundle = load(dir.string());
        fuzzing::Campaign campaign{bundle, evm::genesis_world(bundle),
            fuzzing::seed_initial_target(bundle->functions), seed};
        std::vector<size_t> history{campaign.coverage().covered_count()};
        for (uint64_t i = 0; i < max_fuzz_iterations && !orchestrator::detect_plateau(history, window); ++i)
        {
            campaign.run(fuzzing::iteration_execs);
            history.push_back(campaign.coverage().covered_count());
        }
        if (orchestrator::routable_uncovered(*bundle, campaign.coverage()).empty())
        {
            std::cout << dir.filename().string() << ": fully covered, skipped\n";
            continue;
        }
        auto features = orchestrator::build_forecast_features(*bundle, campaign.coverage(), campaign.bugs());
        const auto outcome = orchestrator::label_ground_truth(bundle, campaign, model.get());
        features.ground_truth = outcome.label;
        std::cout << dir.filename().string() << ": label " << outcome.label << " (concolic +"
                  << outcome.concolic.new_bugs << " bugs +" << outcome.concolic.new_instructions
                  << " instructions, generator +" << outcome.generator.new_bugs << " bugs +"
                  << outcome.generator.new_instructions << " instructions)\n";
        samples.push_back({dir.filename().string(), std::move(features)});
    }
    for (const auto& f : models::export_finetune_dataset(samples, folds, out))
        std::cout << "wrote " << f.string() << "\n";
    return 0;
}
}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"sctest: hybrid smart-contract testing engine"};
    app.require_subcommand(1);

    orchestrator::PipelineConfig cfg;
    std::string bundle_dir, out = "sctest-out", emit_smt;
    auto* run = app.add_subcommand("run", "fuzz a bundle, routing coverage plateaus to concolic execution or a model");
    run->add_option("bundle", bundle_dir, "bundle directory")->required();
    run->add_option("--time-budget", cfg.time_budget_s, "seconds")->capture_default_str();
    run->add_option("--max-iterations", cfg.max_iterations, "solver calls per concolic route")->capture_default_str();
    run->add_option("--depth", cfg.depth, "transaction sequence depth for concolic execution")->capture_default_str();
    run->add_option("--memory-budget", cfg.memory_budget_bytes, "snapshot cache bytes")->capture_default_str();
    run->add_option("--itr", cfg.itr, "repair iterations per generated target")->capture_default_str();
    run->add_option("--plateau-window", cfg.plateau_window, "iterations without new coverage")->capture_default_str();
    run->add_option("--seed", cfg.rng_seed, "rng seed")->capture_default_str();
    run->add_option("--model", cfg.model, "heuristic | stub:<file> | http:<config>")->capture_default_str();
    run->add_option("--emit-smt", emit_smt, "write unsolved constraints as SMT-LIB files here");
    run->add_option("--out", out, "output directory")->capture_default_str();

    std::string corpus_dir;
    auto* replay = app.add_subcommand("replay", "re-execute a saved corpus from genesis");
    replay->add_option("bundle", bundle_dir, "bundle directory")->required();
    replay->add_option("corpus", corpus_dir, "corpus directory")->required();

    std::string root, model_spec = "heuristic";
    unsigned folds = 5, window = 10;
    uint64_t seed = 0, max_fuzz = 30;
    auto* dataset = app.add_subcommand("dataset", "label bundles and export fine-tuning shards");
    dataset->add_option("bundles", root, "directory of bundle directories")->required();
    dataset->add_option("--folds", folds, "number of shards")->capture_default_str();
    dataset->add_option("--out", out, "output directory")->required();
    dataset->add_option("--model", model_spec, "generator model for labeling")->capture_default_str();
    dataset->add_option("--seed", seed, "rng seed")->capture_default_str();
    dataset->add_option("--plateau-window", window, "iterations without new coverage")->capture_default_str();
    dataset->add_option("--max-fuzz-iterations", max_fuzz, "fuzzing iterations before labeling")
        ->capture_default_str();

    std::string target_file;
    auto* validate = app.add_subcommand("validate", "check a fuzz target against a bundle's ABI");
    validate->add_option("target", target_file, ".ft file")->required();
    validate->add_option("bundle", bundle_dir, "bundle directory")->required();

    CLI11_PARSE(app, argc, argv);
    try
    {
        if (*run)
        {
            if (!emit_smt.empty())
                cfg.emit_smt = emit_smt;
            return cmd_run(bundle_dir, cfg, out);
        }
        if (*replay)
            return cmd_replay(bundle_dir, corpus_dir);
        if (*dataset)
        {
            if (folds == 0)
                throw Error(ErrorCode::InvalidConfig, "--folds must be positive");
            return cmd_dataset(root, folds, out, model_spec, seed, window, max_fuzz);
        }
        return cmd_validate(target_file, bundle_dir);
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
