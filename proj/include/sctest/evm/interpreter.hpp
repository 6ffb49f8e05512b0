// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/instruction.hpp>
#include <sctest/evm/world.hpp>

#include <span>
#include <utility>
#include <vector>

namespace sctest::evm
{
enum class Halt : uint8_t
{
    STOP,
    RETURN,
    REVERT,
    INVALID,
    OUT_OF_GAS,
};

const char* to_string(Halt h) noexcept;

struct ExternalCall
{
    enum class Kind : uint8_t
    {
        CREATE,
        CREATE2,
        CALL,
        DELEGATECALL,
        STATICCALL,
        SELFDESTRUCT,
    };
    Kind kind = Kind::CALL;
    Address from;
    Address to;
    U256 value;
    uint32_t pc = 0;
    int depth = 0;
    bool executed_inline = false;

    friend bool operator==(const ExternalCall&, const ExternalCall&) = default;
};

const char* to_string(ExternalCall::Kind k) noexcept;

struct LogRecord
{
    Address address;
    std::vector<U256> topics;
    Bytes data;

    friend bool operator==(const LogRecord&, const LogRecord&) = default;
};

struct ExecResult
{
    Halt halt = Halt::STOP;
    Bytes output;  ///< RETURN or REVERT data
    std::vector<ExternalCall> external_calls;
    uint64_t gas_used = 0;
    std::vector<uint32_t> trace;  ///< offsets executed in the destination's own frame
    std::vector<LogRecord> logs;
    uint32_t halt_pc = 0;

    bool succeeded() const noexcept { return halt == Halt::STOP || halt == Halt::RETURN; }
    friend bool operator==(const ExecResult&, const ExecResult&) = default;
};

/// Flat cost table; every instruction costs at least 1.
uint64_t base_gas(bytecode::Op op) noexcept;

/// Read-only view of the running frame handed to observers.
struct FrameView
{
    int depth = 0;
    Address address;
    std::span<const U256> stack;  ///< bottom first; back() is the top
    const Bytes& memory;
    const Bytes& calldata;
    uint32_t pc = 0;
};

/// Instruction-level hooks. `after` runs only when the instruction completed normally
/// (not on halts or exceptional stops).
class Observer
{
public:
    virtual ~Observer() = default;
    virtual void before(const FrameView& frame, const bytecode::Instruction& ins) = 0;
    virtual void after(const FrameView& frame, const bytecode::Instruction& ins) = 0;
};

/// Executes one transaction in place. Storage writes are discarded on REVERT, INVALID and
/// OUT_OF_GAS. Throws UnknownDestination, MalformedCalldata, InsufficientBalance.
ExecResult execute_tx_inplace(EvmWorld& world, const Transaction& tx, Observer* observer = nullptr);

std::pair<EvmWorld, ExecResult> execute_tx(EvmWorld world, const Transaction& tx);

std::pair<EvmWorld, std::vector<ExecResult>> execute_sequence(
    EvmWorld world, const std::vector<Transaction>& txs);

/// Builds a transaction calling `fn` on the world's contract with encoded arguments.
Transaction make_tx(const FunctionSig& fn, std::vector<AbiValue> args, const Address& source,
    const Address& destination, const U256& value = {}, uint64_t delay = 0);

}  // namespace sctest::evm
