// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/instruction.hpp>
#include <sctest/common/error.hpp>

#include <cstdio>

namespace sctest::bytecode
{
std::vector<Instruction> decode(BytesView code)
{
    std::vector<Instruction> out;
    for (size_t pc = 0; pc < code.size();)
    {
        const uint8_t b = code[pc];
        const auto& info = op_info(b);
        Instruction ins{static_cast<uint32_t>(pc), op_of(b), b, {}};
        if (info.immediate_len > 0)
        {
            if (pc + 1 + info.immediate_len > code.size())
                throw Error(ErrorCode::TruncatedImmediate,
                    std::string{info.mnemonic} + " at offset " + std::to_string(pc) + " needs " +
                        std::to_string(info.immediate_len) + " bytes");
            ins.immediate.assign(code.begin() + static_cast<ptrdiff_t>(pc) + 1,
                code.begin() + static_cast<ptrdiff_t>(pc) + 1 + info.immediate_len);
        }
        pc += ins.size();
        out.push_back(std::move(ins));
    }
    return out;
}

Bytes encode(const std::vector<Instruction>& instructions)
{
    Bytes out;
    for (const auto& ins : instructions)
    {
        out.push_back(ins.byte);
        out.insert(out.end(), ins.immediate.begin(), ins.immediate.end());
    }
    return out;
}

std::string disassemble_line(const Instruction& ins)
{
    char head[16];
    std::snprintf(head, sizeof(head), "%04x: ", ins.offset);
    std::string line = head;
    if (!ins.info().supported)
    {
        char raw[32];
        std::snprintf(raw, sizeof(raw), "INVALID (0x%02x)", ins.byte);
        return line + raw;
    }
    line += ins.info().mnemonic;
    if (!ins.immediate.empty())
        line += " " + to_hex(ins.immediate);
    return line;
}

Program::Program(Bytes code) : code_{std::move(code)}, instructions_{decode(code_)}
{
    index_.assign(code_.size(), -1);
    for (size_t i = 0; i < instructions_.size(); ++i)
        index_[instructions_[i].offset] = static_cast<int>(i);
}

bool Program::is_jumpdest(const U256& target) const noexcept
{
    if (!target.fits_u64() || target.low64() >= code_.size())
        return false;
    const int idx = index_at(static_cast<uint32_t>(target.low64()));
    return idx >= 0 && instructions_[static_cast<size_t>(idx)].op == Op::JUMPDEST;
}

}  // namespace sctest::bytecode
