// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/concolic/shadow.hpp>
#include <sctest/coverage/coverage_map.hpp>
#include <sctest/fuzzing/testcase.hpp>

#include <filesystem>
#include <optional>
#include <vector>

namespace sctest::concolic
{
/// Exploration state: `tx` runs after `prefix`; Φ is constraints[0, k) and φ is
/// constraints[k], the branch to flip.
struct ConcolicState
{
    std::vector<evm::Transaction> prefix;
    evm::Transaction tx;
    std::vector<PathConstraint> constraints;
    size_t k = 0;
    Assignment env;
    unsigned loop_attempt = 0;  ///< concretize_loop attempt the arguments came from
    uint64_t seq = 0;           ///< insertion order, breaks scheduling ties

    const PathConstraint& target() const { return constraints[k]; }
};

struct DriveBudget
{
    uint64_t iterations = 10;  ///< solver calls
    size_t depth = 2;          ///< longest transaction sequence explored symbolically
};

struct DriveOptions
{
    bool snapshot_cache = true;
    uint64_t snapshot_budget_bytes = uint64_t{1} << 30;
    std::optional<std::filesystem::path> emit_smt;  ///< one file per Unknown conjunction
    PreimageTable* preimages = nullptr;              ///< shared table; a local one when null
};

struct DriveStats
{
    uint64_t solver_calls = 0;
    uint64_t sat = 0;
    uint64_t unsat = 0;
    uint64_t unknown = 0;
    uint64_t divergences = 0;
    uint64_t escalations = 0;
    uint64_t smt_files = 0;
};

struct DriveResult
{
    std::vector<fuzzing::TestCase> testcases;  ///< executed seeds first, then solved inputs
    coverage::CoverageMap coverage;            ///< the input map plus everything executed here
    DriveStats stats;
};

/// Concolic exploration from `seeds` (the initial target's seed when empty). `world`
/// must have the bundle deployed at its genesis address. Single worker, deterministic.
DriveResult drive(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const fuzzing::Corpus& seeds,
    const coverage::CoverageMap& coverage, const DriveBudget& budget = {}, const DriveOptions& options = {});

}  // namespace sctest::concolic
