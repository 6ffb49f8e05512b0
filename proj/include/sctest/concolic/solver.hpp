// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/concolic/sym_expr.hpp>

#include <map>
#include <string>
#include <vector>

namespace sctest::concolic
{
struct SolverResult
{
    enum class Status : uint8_t
    {
        Sat,
        Unsat,
        Unknown,
    };

    Status status = Status::Unknown;
    std::map<VarId, U256> model;  ///< Sat only: values of the variables that were solved
    std::string reason;           ///< Unknown only

    bool sat() const noexcept { return status == Status::Sat; }
};

const char* to_string(SolverResult::Status s) noexcept;

struct SolveOptions
{
    /// Values for pinned variables. Length variables are always pinned; when a predicate
    /// has several unknowns, all but one are pinned too.
    const Assignment* env = nullptr;
    /// Candidate sets up to this size are searched exhaustively.
    uint64_t enumeration_limit = 1u << 16;
};

/// Built-in procedure: fold constants, solve single-unknown linear equalities and
/// inequalities exactly modulo 2^256, enumerate small residual domains, else Unknown.
/// Every Sat model is checked by substitution before it is returned.
SolverResult solve(const std::vector<SymRef>& conjunction, const SolveOptions& options = {});

}  // namespace sctest::concolic
