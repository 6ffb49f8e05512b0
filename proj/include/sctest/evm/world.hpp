// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/bundle.hpp>
#include <sctest/common/bytes.hpp>

#include <deque>
#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sctest::evm
{
using bytecode::AbiValue;
using bytecode::ContractBundle;
using bytecode::FunctionSig;

inline constexpr uint64_t default_tx_gas = 10'000'000;
inline constexpr uint64_t default_timestamp = 1'000'000;
/// Inline call nesting limit; deeper calls fail without executing.
inline constexpr int max_call_depth = 8;

struct Account
{
    Address address;
    U256 balance;

    friend bool operator==(const Account&, const Account&) = default;
};

struct Transaction
{
    std::string function_call;
    std::vector<AbiValue> args;  ///< structured arguments; call_data is their encoding
    Bytes call_data;
    uint64_t delay = 0;
    uint64_t gas = default_tx_gas;
    U256 gas_price;  ///< carried, not used by the interpreter
    Address source;
    Address destination;
    U256 value;

    friend bool operator==(const Transaction&, const Transaction&) = default;
};

struct BlockContext
{
    uint64_t timestamp = default_timestamp;
    uint64_t number = 1;

    friend bool operator==(const BlockContext&, const BlockContext&) = default;
};

struct CallFrameInfo
{
    Address address;
    std::string function_call;
};

using Storage = std::map<U256, U256>;

/// The modelled chain: accounts, deployed code, storage and block context.
///
/// A plain value type. Deployed bundles are shared immutable pointers, so copies are cheap
/// relative to the storage they carry.
class EvmWorld
{
public:
    std::map<Address, U256> balances;
    std::map<Address, std::shared_ptr<const ContractBundle>> deployed;
    std::map<Address, Storage> storage;  ///< zero slots are never stored
    std::vector<CallFrameInfo> runtime_stack;
    std::deque<Transaction> tx_queue;
    bool fallback_monitor = true;
    BlockContext block;

    std::vector<Account> accounts() const;
    U256 balance(const Address& a) const;
    U256 sload(const Address& a, const U256& slot) const;
    void sstore(const Address& a, const U256& slot, const U256& value);
    const ContractBundle* contract(const Address& a) const;

    /// Equality of the persistent state (balances, storage, block).
    bool same_state(const EvmWorld& other) const;
};

/// Builds a world from genesis accounts; throws Error(DuplicateAddress).
EvmWorld new_world(const bytecode::GenesisConfig& genesis);

/// Registers a contract; throws Error(AddressInUse).
EvmWorld deploy(EvmWorld world, std::shared_ptr<const ContractBundle> contract, const Address& at);

/// new_world(bundle genesis) with the bundle deployed at its configured address.
EvmWorld genesis_world(std::shared_ptr<const ContractBundle> contract);

/// Canonical text of a transaction (used for snapshot keys and test-case ids).
std::string canonical(const Transaction& tx);

}  // namespace sctest::evm
