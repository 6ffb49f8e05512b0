// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/concolic/shadow.hpp>

#include <optional>
#include <vector>

namespace sctest::concolic
{
/// Polynomial degree of e in v; non-polynomial operators take the maximum of their
/// operands, and a non-constant exponent counts as degree 64.
unsigned degree_in(const SymRef& e, const VarId& v);

/// True when e multiplies (or exponentiates) two variable-dependent operands, or
/// divides by one.
bool has_nonlinear_term(const SymRef& e);

/// The variable concretize_nonlinear keeps symbolic: lowest degree, then lowest id.
/// Length variables are never kept.
std::optional<VarId> preferred_unknown(const SymRef& pred);

/// Replaces, inside every nonlinear subterm, each variable other than `keep` by its value
/// in env. Without `keep`, preferred_unknown(pred) is used. Linear predicates come back
/// unchanged. Throws Error(NoSymbolicInput) when pred mentions no variable.
SymRef concretize_nonlinear(const SymRef& pred, const Assignment& env, std::optional<VarId> keep = std::nullopt);

/// Rewrites a top-level equality between two hashes, or between a hash and a constant
/// with a recorded preimage, into equalities of the hashed buffers; then replaces each
/// remaining hash whose variables all have values in env by its digest.
SymRef concretize_keccak(const SymRef& pred, const Assignment& env, const PreimageTable* preimages = nullptr);

/// Splits nested ANDs of 0/1-valued terms into separate predicates.
std::vector<SymRef> split_conjuncts(const SymRef& pred);

/// Lengths tried for dynamic parameters, in order.
inline constexpr uint32_t loop_lengths[] = {1, 2, 4, 8};

/// Pins dynamic lengths for attempt `attempt` (0-based). Attempt 0 keeps the current
/// length, using 1 for empty parameters; later attempts use 2, 4, 8, skipping lengths
/// not above the current one. Added elements are zero. Returns nullopt once the schedule
/// is exhausted or when the function has no dynamic parameter.
std::optional<std::vector<AbiValue>> concretize_loop(const FunctionSig& fn, const std::vector<AbiValue>& args,
    unsigned attempt);

}  // namespace sctest::concolic
