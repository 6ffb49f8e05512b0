// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/concolic/sym_expr.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sctest::concolic
{
/// SMT-LIB v2 script (QF_BV, 256-bit vectors) asserting every predicate is nonzero.
/// Hashes, storage reads and symbolic exponents become unconstrained constants.
std::string to_smtlib(const std::vector<SymRef>& conjunction);

/// Writes to_smtlib(conjunction) to dir/<16 hex digits of its hash>.smt2 and returns the path.
std::filesystem::path emit_smtlib(const std::filesystem::path& dir, const std::vector<SymRef>& conjunction);

}  // namespace sctest::concolic
