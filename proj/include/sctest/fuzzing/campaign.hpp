// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/coverage/coverage_map.hpp>
#include <sctest/evm/snapshot.hpp>
#include <sctest/fuzzing/mutator.hpp>

#include <chrono>
#include <memory>
#include <optional>

namespace sctest::fuzzing
{
/// Executions per campaign iteration.
inline constexpr uint64_t iteration_execs = 1000;

struct Budget
{
    uint64_t execs = 0;
    uint64_t seconds = 0;  ///< 0 means no time limit
};

struct CampaignResult
{
    coverage::CoverageMap coverage;
    Corpus corpus;
    BugReport bugs;
    uint64_t execs = 0;
    std::vector<size_t> history;  ///< covered-instruction count after each full iteration
};

/// Coverage-guided fuzzing state. Single-threaded and deterministic for a given seed.
class Campaign
{
public:
    /// `world` must have the bundle deployed at its genesis address. Throws
    /// Error(InvalidTarget) when the target does not fit the ABI.
    Campaign(std::shared_ptr<const bytecode::ContractBundle> bundle, evm::EvmWorld world, FuzzTarget target,
        uint64_t rng_seed);

    /// Runs up to `n` executions, stopping early past `deadline`. Returns the number of
    /// newly covered instructions.
    size_t run(uint64_t n, std::optional<std::chrono::steady_clock::time_point> deadline = std::nullopt);

    /// Replaces the target; coverage, corpus and findings are kept. Entries from earlier
    /// targets are no longer mutated.
    void install_target(FuzzTarget target);

    /// Executes an externally produced test case from the campaign's initial world and
    /// keeps it when it adds coverage. Returns the number of new instructions.
    size_t add_testcase(TestCase tc);

    const coverage::CoverageMap& coverage() const noexcept { return coverage_; }
    const Corpus& corpus() const noexcept { return corpus_; }
    const BugReport& bugs() const noexcept { return bugs_; }
    const FuzzTarget& target() const noexcept { return target_; }
    uint64_t execs() const noexcept { return execs_; }
    const std::vector<size_t>& history() const noexcept { return history_; }
    const evm::EvmWorld& initial_world() const noexcept { return world_; }
    CampaignResult result() const;

private:
    struct Scheduled
    {
        size_t entry;  ///< index into corpus_.entries
        size_t score = 1;
        std::vector<uint32_t> blocks;  ///< distinct blocks entered by the entry's transactions
    };

    /// Executes the fuzz part of tc from the post-setup snapshot.
    size_t execute(const TestCase& tc);
    /// Merges results, records findings and keeps tc when it adds coverage.
    size_t record(const TestCase& tc, const std::vector<evm::ExecResult>& results, const evm::EvmWorld& after,
        bool schedulable);
    void rescore();
    size_t pick();

    std::shared_ptr<const bytecode::ContractBundle> bundle_;
    evm::EvmWorld world_;
    FuzzTarget target_;
    Rng rng_;
    std::shared_ptr<const evm::Snapshot> setup_;
    TestCase seed_;
    bool pending_seed_ = true;
    coverage::CoverageMap coverage_;
    Corpus corpus_;
    BugReport bugs_;
    std::vector<Scheduled> schedule_;  ///< entries of the current target
    bool scores_stale_ = true;
    uint64_t execs_ = 0;
    std::vector<size_t> history_;
};

CampaignResult run_campaign(std::shared_ptr<const bytecode::ContractBundle> bundle, const evm::EvmWorld& world,
    const FuzzTarget& target, Budget budget, uint64_t rng_seed);

/// Drops entries whose coverage (instructions and paths) the remaining entries already
/// provide, keeping the earliest of equivalent entries.
Corpus minimize_corpus(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const Corpus& corpus);

struct ReplayResult
{
    coverage::CoverageMap coverage;
    BugReport bugs;
    std::vector<std::string> stale;  ///< ids of entries that failed to execute
};

/// Executes every test case from `world` and re-derives coverage and findings.
ReplayResult replay(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const Corpus& corpus);
ReplayResult replay(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world,
    const std::vector<TestCase>& testcases);

}  // namespace sctest::fuzzing
