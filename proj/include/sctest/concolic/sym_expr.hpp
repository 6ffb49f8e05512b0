// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/common/u256.hpp>

#include <compare>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

namespace sctest::concolic
{
enum class SymOp : uint8_t
{
    ADD,
    SUB,
    MUL,
    DIV,
    MOD,
    EXP,
    LT,
    GT,
    EQ,
    AND,
    OR,
    XOR,
    SHL,
    SHR,
    NOT,
    ISZERO,
    NEG,
};

const char* to_string(SymOp op) noexcept;
bool is_unary(SymOp op) noexcept;
/// Operators whose result is always 0 or 1.
bool is_boolean(SymOp op) noexcept;

enum class VarKind : uint8_t
{
    word,     ///< a static parameter
    element,  ///< an array element or one byte of a bytes payload
    length,   ///< a dynamic parameter's length; always pinned when solving
};

/// A symbolic input: parameter number plus element (or byte) index.
struct VarId
{
    uint16_t param = 0;
    uint32_t index = 0;
    VarKind kind = VarKind::word;

    friend auto operator<=>(const VarId&, const VarId&) = default;
};

std::string to_string(const VarId& v);

struct SymExpr;
using SymRef = std::shared_ptr<const SymExpr>;

struct SymExpr
{
    enum class Kind : uint8_t
    {
        Const,
        Input,
        Unop,
        Binop,
        Keccak,
        Sload,
    };

    Kind kind = Kind::Const;
    U256 value;         ///< Const
    VarId var;          ///< Input
    unsigned bits = 256;  ///< Input: declared width of the variable
    unsigned ub = 256;    ///< upper bound on the value's bit length
    SymOp op = SymOp::ADD;
    /// Binop: {a, b} in EVM operand order (a was on top), so LT(a, b) is a < b and
    /// SHL(a, b) is b << a. Keccak: the buffer as 32-byte words. Sload: {slot}.
    std::vector<SymRef> args;
    uint32_t size = 0;  ///< Keccak: buffer length in bytes
};

// Builders fold constants and apply a few exact identities (x+0, x*1, masks wider than
// the operand, shifts past the operand's width). Hashes stay symbolic until fold().
SymRef constant(const U256& v);
SymRef input(const VarId& v, unsigned bits);
SymRef unop(SymOp op, SymRef a);
SymRef binop(SymOp op, SymRef a, SymRef b);
SymRef keccak(std::vector<SymRef> words, uint32_t size);
SymRef sload(SymRef slot);

/// Concrete values for variables plus the contract storage at the start of the call.
struct Assignment
{
    std::map<VarId, U256> values;
    std::map<U256, U256> storage;

    /// Unassigned variables read as zero.
    U256 get(const VarId& v) const;
    bool has(const VarId& v) const { return values.count(v) != 0; }
};

/// Total evaluation; matches the interpreter's arithmetic bit for bit.
U256 eval(const SymExpr& e, const Assignment& env);
inline U256 eval(const SymRef& e, const Assignment& env)
{
    return eval(*e, env);
}

/// Bytes hashed by a Keccak node under `env`.
std::vector<uint8_t> keccak_buffer(const SymExpr& k, const Assignment& env);

bool is_const(const SymRef& e) noexcept;
std::set<VarId> inputs_of(const SymRef& e);
/// Declared width of every variable in e.
std::map<VarId, unsigned> widths_of(const SymRef& e);
bool contains_kind(const SymRef& e, SymExpr::Kind kind);
bool same_expr(const SymRef& a, const SymRef& b);
/// Upper bound on the bit length of e's value.
unsigned width_bound(const SymRef& e);

/// Rebuilds e bottom-up; `leaf` may replace Input nodes (return nullptr to keep them).
SymRef substitute(const SymRef& e, const std::function<SymRef(const SymExpr&)>& leaf);
/// Replaces the listed variables by constants.
SymRef pin(const SymRef& e, const std::map<VarId, U256>& values);
/// Collapses every variable-free subtree to its value, hashes included, reading Sload
/// from env.storage.
SymRef fold(const SymRef& e, const Assignment& env);

/// Infix rendering for logs and diagnostics, e.g. "(in0 * in0) == 4".
std::string render(const SymRef& e);

}  // namespace sctest::concolic
