// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/common/bytes.hpp>

#include <map>
#include <string>
#include <string_view>

namespace sctest::bytecode
{
/// Output of the fixture assembler.
struct Assembly
{
    Bytes code;
    std::map<uint32_t, int> linemap;  ///< instruction offset -> source line
    std::map<std::string, uint32_t> labels;
};

/// Assembles the small text format used for test fixtures.
///
///   ; comment (also #)
///   name:              defines a label and emits JUMPDEST
///   @name              PUSH2 <label offset>
///   PUSH 300           smallest PUSHn holding the value
///   PUSH4 0x01         explicit width
///   SEL f(uint256)     PUSH4 of the function selector
///   .line 12           following instructions map to source line 12 (.line 0 stops)
///   .byte 0x0c         raw byte
///
/// Tokens are whitespace separated, so several instructions may share a line.
/// Throws Error(AssemblyError) with the line number on bad input.
Assembly assemble(std::string_view text);

}  // namespace sctest::bytecode
