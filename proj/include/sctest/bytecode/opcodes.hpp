// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/common/u256.hpp>

#include <cstdint>
#include <optional>
#include <string_view>

namespace sctest::bytecode
{
enum class Op : uint8_t
{
    STOP = 0x00,
    ADD = 0x01,
    MUL = 0x02,
    SUB = 0x03,
    DIV = 0x04,
    MOD = 0x06,
    EXP = 0x0a,
    LT = 0x10,
    GT = 0x11,
    EQ = 0x14,
    ISZERO = 0x15,
    AND = 0x16,
    OR = 0x17,
    XOR = 0x18,
    NOT = 0x19,
    SHL = 0x1b,
    SHR = 0x1c,
    SHA3 = 0x20,
    ADDRESS = 0x30,
    BALANCE = 0x31,
    CALLER = 0x33,
    CALLVALUE = 0x34,
    CALLDATALOAD = 0x35,
    CALLDATASIZE = 0x36,
    CALLDATACOPY = 0x37,
    TIMESTAMP = 0x42,
    NUMBER = 0x43,
    POP = 0x50,
    MLOAD = 0x51,
    MSTORE = 0x52,
    MSTORE8 = 0x53,
    SLOAD = 0x54,
    SSTORE = 0x55,
    JUMP = 0x56,
    JUMPI = 0x57,
    PC = 0x58,
    GAS = 0x5a,
    JUMPDEST = 0x5b,
    PUSH1 = 0x60,
    PUSH32 = 0x7f,
    DUP1 = 0x80,
    DUP16 = 0x8f,
    SWAP1 = 0x90,
    SWAP16 = 0x9f,
    LOG0 = 0xa0,
    LOG4 = 0xa4,
    CREATE = 0xf0,
    CALL = 0xf1,
    RETURN = 0xf3,
    DELEGATECALL = 0xf4,
    CREATE2 = 0xf5,
    STATICCALL = 0xfa,
    REVERT = 0xfd,
    INVALID = 0xfe,
    SELFDESTRUCT = 0xff,
};

enum class OpKind : uint8_t
{
    arith,
    cmp,
    bit,
    stack,
    mem,
    storage,
    ctrl,
    env,
    hash,
    call,
    log,
    halt,
};

struct OpInfo
{
    std::string_view mnemonic;
    uint8_t immediate_len = 0;
    OpKind kind = OpKind::halt;
    uint8_t inputs = 0;
    uint8_t outputs = 0;
    bool supported = false;
};

/// Table entry for a raw byte. Unsupported bytes report INVALID's shape with
/// supported == false.
const OpInfo& op_info(uint8_t byte) noexcept;

/// Maps a raw byte onto the supported opcode set (unknown bytes become INVALID).
Op op_of(uint8_t byte) noexcept;

/// Mnemonic lookup ("PUSH1", "DUP3", ...). Returns the raw byte.
std::optional<uint8_t> op_from_mnemonic(std::string_view mnemonic) noexcept;

/// True for the two-operand arithmetic, comparison and bitwise instructions.
bool is_binary_value_op(Op op) noexcept;

/// Result of a two-operand instruction; `a` is the operand that was on top of the stack.
U256 apply_binop(Op op, const U256& a, const U256& b) noexcept;

/// ISZERO and NOT.
U256 apply_unop(Op op, const U256& a) noexcept;

constexpr bool is_push(uint8_t byte) noexcept
{
    return byte >= 0x60 && byte <= 0x7f;
}

/// True for the instructions that end a basic block with no successor.
constexpr bool is_terminal(Op op) noexcept
{
    return op == Op::STOP || op == Op::RETURN || op == Op::REVERT || op == Op::INVALID ||
           op == Op::SELFDESTRUCT;
}

}  // namespace sctest::bytecode
