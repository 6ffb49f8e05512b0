// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/opcodes.hpp>
#include <sctest/common/bytes.hpp>

#include <string>
#include <vector>

namespace sctest::bytecode
{
struct Instruction
{
    uint32_t offset = 0;
    Op op = Op::STOP;
    uint8_t byte = 0;  ///< raw byte; differs from op only for unknown bytes (op == INVALID)
    Bytes immediate;

    uint32_t size() const noexcept { return 1 + static_cast<uint32_t>(immediate.size()); }
    uint32_t next_offset() const noexcept { return offset + size(); }
    U256 push_value() const noexcept { return U256::from_be(immediate); }
    const OpInfo& info() const noexcept { return op_info(byte); }

    friend bool operator==(const Instruction&, const Instruction&) = default;
};

/// Full, gap-free decoding. Unknown bytes decode as INVALID.
/// Throws Error(TruncatedImmediate) when a PUSH runs past the end.
std::vector<Instruction> decode(BytesView code);

/// Inverse of decode().
Bytes encode(const std::vector<Instruction>& instructions);

/// One line per instruction: "0004: PUSH1 0x01".
std::string disassemble_line(const Instruction& ins);

/// Decoded program with offset lookup.
class Program
{
public:
    Program() = default;
    explicit Program(Bytes code);

    const Bytes& code() const noexcept { return code_; }
    const std::vector<Instruction>& instructions() const noexcept { return instructions_; }

    /// Instruction index at a byte offset, or -1 when the offset is inside an immediate
    /// or out of range.
    int index_at(uint32_t offset) const noexcept
    {
        return offset < index_.size() ? index_[offset] : -1;
    }
    bool is_jumpdest(const U256& target) const noexcept;

private:
    Bytes code_;
    std::vector<Instruction> instructions_;
    std::vector<int> index_;
};

}  // namespace sctest::bytecode
