// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/abi.hpp>
#include <sctest/bytecode/instruction.hpp>

#include <map>
#include <string>
#include <utility>
#include <vector>

namespace sctest::bytecode
{
struct BasicBlock
{
    uint32_t id = 0;
    uint32_t first = 0;  ///< index of the first instruction
    uint32_t last = 0;   ///< index of the last instruction (inclusive)
    uint32_t start_offset = 0;
    uint32_t end_offset = 0;  ///< one past the last byte
    std::vector<uint32_t> succs;
    std::vector<uint32_t> preds;
    bool unresolved_jump = false;  ///< JUMP/JUMPI target not a same-block constant
};

/// Name used for the selector-dispatch region in call_edges.
inline constexpr std::string_view dispatcher_name = "dispatcher";

struct DispatchEntry
{
    Selector selector{};
    uint32_t target = 0;       ///< entry offset the dispatcher jumps to
    uint32_t jumpi_offset = 0;  ///< offset of the dispatching JUMPI
};

class Cfg
{
public:
    std::vector<BasicBlock> blocks;
    std::vector<std::pair<uint32_t, uint32_t>> branch_edges;
    std::vector<std::pair<std::string, std::string>> call_edges;
    std::vector<DispatchEntry> dispatch;

    /// Block id for an instruction index.
    uint32_t block_of_index(size_t ins_index) const { return block_of_index_[ins_index]; }
    /// Block id for a byte offset, or -1 when the offset is not an instruction start.
    int block_at(uint32_t offset) const noexcept;

    /// Immediate dominator per block (-1 for the root and unreachable blocks).
    const std::vector<int>& idom() const noexcept { return idom_; }
    bool dominates(uint32_t a, uint32_t b) const noexcept;

    /// Blocks reachable from `from` in the branch graph.
    std::vector<bool> reachable_from(uint32_t from) const;

    /// Blocks that sit on a cycle together with `block` (its strongly connected component,
    /// empty when the block is not on any cycle).
    std::vector<uint32_t> cycle_of(uint32_t block) const;

private:
    friend Cfg build_cfg(const Program& program, std::vector<FunctionSig>& functions);
    std::vector<uint32_t> block_of_index_;
    std::vector<int> offset_to_block_;
    std::vector<int> idom_;
    std::vector<int> scc_;
    std::vector<size_t> scc_size_;
};

/// Builds the control-flow graph. Functions lacking entry_offset or body_range get them
/// filled from the dispatch pattern (DUP1 PUSH4 <sel> EQ PUSHn <dest> JUMPI) and the
/// dominator tree; a function whose selector is not dispatched keeps them empty.
Cfg build_cfg(const Program& program, std::vector<FunctionSig>& functions);

/// Block ids whose start offset lies inside the function's body range.
std::vector<uint32_t> body_blocks(const Cfg& cfg, const FunctionSig& fn);

}  // namespace sctest::bytecode
