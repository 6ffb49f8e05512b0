// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/opcodes.hpp>

#include <array>
#include <string>

namespace sctest::bytecode
{
namespace
{
constexpr std::string_view push_names[] = {"PUSH1", "PUSH2", "PUSH3", "PUSH4", "PUSH5", "PUSH6",
    "PUSH7", "PUSH8", "PUSH9", "PUSH10", "PUSH11", "PUSH12", "PUSH13", "PUSH14", "PUSH15",
    "PUSH16", "PUSH17", "PUSH18", "PUSH19", "PUSH20", "PUSH21", "PUSH22", "PUSH23", "PUSH24",
    "PUSH25", "PUSH26", "PUSH27", "PUSH28", "PUSH29", "PUSH30", "PUSH31", "PUSH32"};
constexpr std::string_view dup_names[] = {"DUP1", "DUP2", "DUP3", "DUP4", "DUP5", "DUP6", "DUP7",
    "DUP8", "DUP9", "DUP10", "DUP11", "DUP12", "DUP13", "DUP14", "DUP15", "DUP16"};
constexpr std::string_view swap_names[] = {"SWAP1", "SWAP2", "SWAP3", "SWAP4", "SWAP5", "SWAP6",
    "SWAP7", "SWAP8", "SWAP9", "SWAP10", "SWAP11", "SWAP12", "SWAP13", "SWAP14", "SWAP15",
    "SWAP16"};
constexpr std::string_view log_names[] = {"LOG0", "LOG1", "LOG2", "LOG3", "LOG4"};

constexpr OpInfo invalid_info{"INVALID", 0, OpKind::halt, 0, 0, false};

constexpr std::array<OpInfo, 256> build_table()
{
    std::array<OpInfo, 256> t{};
    for (auto& e : t)
        e = invalid_info;
    auto set = [&](Op op, std::string_view name, OpKind kind, uint8_t in, uint8_t out) {
        t[static_cast<uint8_t>(op)] = OpInfo{name, 0, kind, in, out, true};
    };
    using enum Op;
    set(STOP, "STOP", OpKind::halt, 0, 0);
    set(ADD, "ADD", OpKind::arith, 2, 1);
    set(MUL, "MUL", OpKind::arith, 2, 1);
    set(SUB, "SUB", OpKind::arith, 2, 1);
    set(DIV, "DIV", OpKind::arith, 2, 1);
    set(MOD, "MOD", OpKind::arith, 2, 1);
    set(EXP, "EXP", OpKind::arith, 2, 1);
    set(LT, "LT", OpKind::cmp, 2, 1);
    set(GT, "GT", OpKind::cmp, 2, 1);
    set(EQ, "EQ", OpKind::cmp, 2, 1);
    set(ISZERO, "ISZERO", OpKind::cmp, 1, 1);
    set(AND, "AND", OpKind::bit, 2, 1);
    set(OR, "OR", OpKind::bit, 2, 1);
    set(XOR, "XOR", OpKind::bit, 2, 1);
    set(NOT, "NOT", OpKind::bit, 1, 1);
    set(SHL, "SHL", OpKind::bit, 2, 1);
    set(SHR, "SHR", OpKind::bit, 2, 1);
    set(SHA3, "SHA3", OpKind::hash, 2, 1);
    set(ADDRESS, "ADDRESS", OpKind::env, 0, 1);
    set(BALANCE, "BALANCE", OpKind::env, 1, 1);
    set(CALLER, "CALLER", OpKind::env, 0, 1);
    set(CALLVALUE, "CALLVALUE", OpKind::env, 0, 1);
    set(CALLDATALOAD, "CALLDATALOAD", OpKind::env, 1, 1);
    set(CALLDATASIZE, "CALLDATASIZE", OpKind::env, 0, 1);
    set(CALLDATACOPY, "CALLDATACOPY", OpKind::env, 3, 0);
    set(TIMESTAMP, "TIMESTAMP", OpKind::env, 0, 1);
    set(NUMBER, "NUMBER", OpKind::env, 0, 1);
    set(POP, "POP", OpKind::stack, 1, 0);
    set(MLOAD, "MLOAD", OpKind::mem, 1, 1);
    set(MSTORE, "MSTORE", OpKind::mem, 2, 0);
    set(MSTORE8, "MSTORE8", OpKind::mem, 2, 0);
    set(SLOAD, "SLOAD", OpKind::storage, 1, 1);
    set(SSTORE, "SSTORE", OpKind::storage, 2, 0);
    set(JUMP, "JUMP", OpKind::ctrl, 1, 0);
    set(JUMPI, "JUMPI", OpKind::ctrl, 2, 0);
    set(PC, "PC", OpKind::ctrl, 0, 1);
    set(GAS, "GAS", OpKind::env, 0, 1);
    set(JUMPDEST, "JUMPDEST", OpKind::ctrl, 0, 0);
    for (uint8_t i = 0; i < 32; ++i)
        t[0x60 + i] = OpInfo{push_names[i], static_cast<uint8_t>(i + 1), OpKind::stack, 0, 1, true};
    for (uint8_t i = 0; i < 16; ++i)
    {
        t[0x80 + i] = OpInfo{dup_names[i], 0, OpKind::stack, static_cast<uint8_t>(i + 1),
            static_cast<uint8_t>(i + 2), true};
        t[0x90 + i] = OpInfo{swap_names[i], 0, OpKind::stack, static_cast<uint8_t>(i + 2),
            static_cast<uint8_t>(i + 2), true};
    }
    for (uint8_t i = 0; i < 5; ++i)
        t[0xa0 + i] = OpInfo{log_names[i], 0, OpKind::log, static_cast<uint8_t>(i + 2), 0, true};
    set(CREATE, "CREATE", OpKind::call, 3, 1);
    set(CALL, "CALL", OpKind::call, 7, 1);
    set(RETURN, "RETURN", OpKind::halt, 2, 0);
    set(DELEGATECALL, "DELEGATECALL", OpKind::call, 6, 1);
    set(CREATE2, "CREATE2", OpKind::call, 4, 1);
    set(STATICCALL, "STATICCALL", OpKind::call, 6, 1);
    set(REVERT, "REVERT", OpKind::halt, 2, 0);
    set(INVALID, "INVALID", OpKind::halt, 0, 0);
    set(SELFDESTRUCT, "SELFDESTRUCT", OpKind::call, 1, 0);
    return t;
}

constexpr auto table = build_table();
}  // namespace

const OpInfo& op_info(uint8_t byte) noexcept
{
    return table[byte];
}

Op op_of(uint8_t byte) noexcept
{
    return table[byte].supported ? static_cast<Op>(byte) : Op::INVALID;
}

std::optional<uint8_t> op_from_mnemonic(std::string_view mnemonic) noexcept
{
    for (size_t i = 0; i < table.size(); ++i)
        if (table[i].supported && table[i].mnemonic == mnemonic)
            return static_cast<uint8_t>(i);
    return std::nullopt;
}

bool is_binary_value_op(Op op) noexcept
{
    switch (op)
    {
    case Op::ADD:
    case Op::SUB:
    case Op::MUL:
    case Op::DIV:
    case Op::MOD:
    case Op::EXP:
    case Op::LT:
    case Op::GT:
    case Op::EQ:
    case Op::AND:
    case Op::OR:
    case Op::XOR:
    case Op::SHL:
    case Op::SHR:
        return true;
    default:
        return false;
    }
}

U256 apply_binop(Op op, const U256& a, const U256& b) noexcept
{
    switch (op)
    {
    case Op::ADD:
        return a + b;
    case Op::SUB:
        return a - b;
    case Op::MUL:
        return a * b;
    case Op::DIV:
        return a / b;
    case Op::MOD:
        return a % b;
    case Op::EXP:
        return exp(a, b);
    case Op::LT:
        return U256{a < b ? 1u : 0u};
    case Op::GT:
        return U256{a > b ? 1u : 0u};
    case Op::EQ:
        return U256{a == b ? 1u : 0u};
    case Op::AND:
        return a & b;
    case Op::OR:
        return a | b;
    case Op::XOR:
        return a ^ b;
    case Op::SHL:
        return shl(b, a);
    case Op::SHR:
        return shr(b, a);
    default:
        return {};
    }
}

U256 apply_unop(Op op, const U256& a) noexcept
{
    if (op == Op::ISZERO)
        return U256{a.is_zero() ? 1u : 0u};
    return ~a;
}

}  // namespace sctest::bytecode
