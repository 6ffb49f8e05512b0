// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <sctest/concolic/sym_expr.hpp>
#include <sctest/evm/snapshot.hpp>

#include <map>
#include <mutex>
#include <optional>
#include <vector>

namespace sctest::concolic
{
using bytecode::AbiValue;
using bytecode::FunctionSig;

/// A branch on a symbolic condition; the predicate is true when nonzero.
struct PathConstraint
{
    SymRef predicate;
    uint32_t branch_offset = 0;
    bool taken = false;  ///< the JUMPI jumped

    /// The predicate in the form that holds on this path.
    SymRef held() const;
    /// The predicate in the form that sends execution the other way.
    SymRef flipped() const;
};

/// One symbolic variable of a call and where its bytes sit in the calldata.
struct InputVar
{
    VarId id;
    unsigned bits = 256;
    uint32_t offset = 0;  ///< first calldata byte of the variable's word (bytes payload: the byte)
    bool single_byte = false;  ///< a bytes payload byte, occupying one calldata byte
};

std::vector<InputVar> input_vars(const FunctionSig& fn, const std::vector<AbiValue>& args);
/// Current values of input_vars(fn, args).
std::map<VarId, U256> values_of(const FunctionSig& fn, const std::vector<AbiValue>& args);
/// Writes solved values back into arguments. Length variables are ignored.
std::vector<AbiValue> apply_model(const FunctionSig& fn, std::vector<AbiValue> args,
    const std::map<VarId, U256>& model);
/// "id", "key[0]", "reason.length"
std::string var_name(const FunctionSig& fn, const VarId& v);

/// Digests computed during execution, keyed by digest. Shared across workers.
class PreimageTable
{
public:
    void add(const U256& digest, const Bytes& preimage);
    std::optional<Bytes> find(const U256& digest) const;
    size_t size() const;

private:
    mutable std::mutex mu_;
    std::map<U256, Bytes> table_;
};

struct SymTrace
{
    evm::ExecResult result;
    std::vector<PathConstraint> constraints;
    Assignment env;  ///< the call's input values and the contract storage before it
};

/// Executes prefix concretely (through `cache` when given), then `tx` with a symbolic
/// shadow over its arguments, recording every branch whose condition depends on them.
SymTrace sym_execute(const evm::EvmWorld& world, const std::vector<evm::Transaction>& prefix,
    const evm::Transaction& tx, evm::SnapshotCache* cache = nullptr, PreimageTable* preimages = nullptr);

}  // namespace sctest::concolic
