// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/coverage/bottleneck.hpp>
#include <sctest/coverage/static_expr.hpp>

#include <algorithm>
#include <sstream>

namespace sctest::coverage
{
using bytecode::Op;

const char* to_string(FunctionStatus s) noexcept
{
    return s == FunctionStatus::fully_uncovered ? "fully_uncovered" : "partially_covered";
}

namespace
{
const bytecode::FunctionSig* owner_of(const ContractBundle& contract, uint32_t block)
{
    for (const auto& fn : contract.functions)
    {
        const auto bs = bytecode::body_blocks(*contract.cfg, fn);
        if (std::find(bs.begin(), bs.end(), block) != bs.end())
            return &fn;
    }
    return nullptr;
}

bool block_entered(const ContractBundle& contract, const CoverageMap& map, uint32_t block)
{
    const auto& bb = contract.cfg->blocks[block];
    return map.covered(contract.genesis.contract_address, bb.start_offset);
}

bool loop_guarded(const ContractBundle& contract, StaticAnalyzer& an, uint32_t block)
{
    const auto cyc = contract.cfg->cycle_of(block);
    for (const uint32_t c : cyc)
    {
        const auto& bb = contract.cfg->blocks[c];
        if (contract.program->instructions()[bb.last].op != Op::JUMPI)
            continue;
        const bool exits = std::any_of(bb.succs.begin(), bb.succs.end(),
            [&](uint32_t s) { return std::find(cyc.begin(), cyc.end(), s) == cyc.end(); });
        if (exits && an.reads_length(an.jumpi_condition(c)))
            return true;
    }
    return false;
}

/// Describes the predicate for moving from `block` into successor `target`.
BranchConstraintInfo describe(const ContractBundle& contract, StaticAnalyzer& an, uint32_t block, uint32_t target,
    const bytecode::FunctionSig* fn)
{
    const auto& cfg = *contract.cfg;
    const auto& bb = cfg.blocks[block];
    const auto& jumpi = contract.program->instructions()[bb.last];
    const bool taken = target != bb.id + 1;
    const auto pred = an.branch_predicate(block, taken);

    BranchConstraintInfo info;
    info.branch_offset = jumpi.offset;
    info.constraint_text = pred->kind == StaticNode::Kind::Unknown ? "opaque" : an.render(pred, fn);
    if (info.constraint_text.find('?') != std::string::npos)
        info.constraint_text = "opaque";
    for (const int p : an.params_read(pred, fn))
        info.inputs_involved.push_back(fn && static_cast<size_t>(p) < fn->param_names.size()
                                           ? fn->param_names[static_cast<size_t>(p)]
                                           : "arg" + std::to_string(p));
    info.features.has_keccak = contains_kind(pred, StaticNode::Kind::Sha3);
    info.features.storage_dependent = contains_kind(pred, StaticNode::Kind::Sload);
    info.features.has_nonlinear_term = has_nonlinear(pred);
    info.features.loop_guarded = loop_guarded(contract, an, block);
    info.function = fn ? fn->name : "";
    if (const auto it = contract.linemap.find(jumpi.offset); it != contract.linemap.end())
        info.line = it->second;
    info.to_revert = contract.program->instructions()[cfg.blocks[target].last].op == Op::REVERT;
    return info;
}
}  // namespace

std::vector<BranchConstraintInfo> extract_bottlenecks(const ContractBundle& contract, const CoverageMap& map)
{
    std::vector<BranchConstraintInfo> out;
    StaticAnalyzer an{contract};
    const auto& cfg = *contract.cfg;
    const auto& code = contract.program->instructions();
    const auto& at = contract.genesis.contract_address;
    for (const auto& bb : cfg.blocks)
    {
        const auto& tail = code[bb.last];
        if (tail.op != Op::JUMPI || bb.succs.size() != 2 || !map.covered(at, tail.offset))
            continue;
        const bool c0 = block_entered(contract, map, bb.succs[0]);
        const bool c1 = block_entered(contract, map, bb.succs[1]);
        if (c0 == c1)
            continue;
        out.push_back(describe(contract, an, bb.id, c0 ? bb.succs[1] : bb.succs[0], owner_of(contract, bb.id)));
    }
    return out;
}

std::vector<UncoveredFunction> extract_uncovered_functions(const ContractBundle& contract, const CoverageMap& map)
{
    const auto& cfg = *contract.cfg;
    const auto& code = contract.program->instructions();
    const auto& at = contract.genesis.contract_address;
    const auto bottlenecks = extract_bottlenecks(contract, map);
    std::vector<UncoveredFunction> out;
    StaticAnalyzer an{contract};

    for (const auto& fn : contract.functions)
    {
        if (!fn.body_range)
            throw Error(ErrorCode::MissingBodyRange, fn.name + " has no body range and no dispatch entry");
        UncoveredFunction u;
        u.sig = fn;
        size_t covered = 0;
        for (const uint32_t b : bytecode::body_blocks(cfg, fn))
            for (uint32_t i = cfg.blocks[b].first; i <= cfg.blocks[b].last; ++i)
            {
                if (map.covered(at, code[i].offset))
                    ++covered;
                else
                    u.uncovered_offsets.push_back(code[i].offset);
            }
        if (u.uncovered_offsets.empty())
            continue;
        std::sort(u.uncovered_offsets.begin(), u.uncovered_offsets.end());
        u.status = covered == 0 ? FunctionStatus::fully_uncovered : FunctionStatus::partially_covered;
        if (u.status == FunctionStatus::fully_uncovered)
        {
            for (const auto& d : cfg.dispatch)
                if (d.selector == fn.selector && fn.entry_offset && d.target == *fn.entry_offset)
                {
                    const int jb = cfg.block_at(d.jumpi_offset);
                    const int eb = cfg.block_at(d.target);
                    if (jb >= 0 && eb >= 0)
                        u.blocking.push_back(describe(contract, an, cfg.block_of_index(
                            static_cast<size_t>(contract.program->index_at(d.jumpi_offset))),
                            static_cast<uint32_t>(eb), nullptr));
                    break;
                }
        }
        else
        {
            for (const auto& b : bottlenecks)
                if (b.function == fn.name)
                    u.blocking.push_back(b);
        }
        out.push_back(std::move(u));
    }
    return out;
}

std::string render_uncovered(const std::vector<UncoveredFunction>& functions)
{
    if (functions.empty())
        return "none";
    std::ostringstream out;
    for (const auto& u : functions)
    {
        out << u.sig.declaration() << ": "
            << (u.status == FunctionStatus::fully_uncovered ? "fully uncovered" : "partially covered") << " ("
            << u.uncovered_offsets.size() << " uncovered instructions)\n";
        for (const auto& b : u.blocking)
        {
            out << "  blocked at ";
            if (b.line > 0)
                out << "line " << b.line;
            else
                out << "offset " << b.branch_offset;
            out << " by: " << b.constraint_text;
            if (!b.inputs_involved.empty())
            {
                out << " [inputs:";
                for (const auto& in : b.inputs_involved)
                    out << " " << in;
                out << "]";
            }
            out << "\n";
        }
    }
    return out.str();
}

}  // namespace sctest::coverage
