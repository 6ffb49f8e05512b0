// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/cfg.hpp>

#include <algorithm>
#include <optional>

namespace sctest::bytecode
{
namespace
{
bool ends_block(Op op) noexcept
{
    return op == Op::JUMP || op == Op::JUMPI || is_terminal(op);
}

/// Constant-propagates the stack within one block to find the jump destination.
std::optional<U256> local_jump_target(const std::vector<Instruction>& ins, uint32_t first, uint32_t last)
{
    // nullopt entries are values produced by unknown computations or that were on the
    // stack at block entry.
    std::vector<std::optional<U256>> stack;
    auto at = [&](size_t depth) -> std::optional<U256> {
        return depth < stack.size() ? stack[stack.size() - 1 - depth] : std::nullopt;
    };
    auto pop = [&](size_t n) {
        for (size_t k = 0; k < n; ++k)
            if (!stack.empty())
                stack.pop_back();
    };
    for (uint32_t i = first; i < last; ++i)
    {
        const auto& in = ins[i];
        const uint8_t b = in.byte;
        if (is_push(b))
            stack.push_back(in.push_value());
        else if (b >= 0x80 && b <= 0x8f)
            stack.push_back(at(b - 0x80u));
        else if (b >= 0x90 && b <= 0x9f)
        {
            const size_t n = b - 0x90u + 1;
            // Grow with unknowns so the swap has both slots.
            while (stack.size() <= n)
                stack.insert(stack.begin(), std::nullopt);
            std::swap(stack[stack.size() - 1], stack[stack.size() - 1 - n]);
        }
        else
        {
            const auto& info = in.info();
            pop(info.inputs);
            for (uint8_t k = 0; k < info.outputs; ++k)
                stack.push_back(std::nullopt);
        }
    }
    return at(0);
}
}  // namespace

int Cfg::block_at(uint32_t offset) const noexcept
{
    return offset < offset_to_block_.size() ? offset_to_block_[offset] : -1;
}

bool Cfg::dominates(uint32_t a, uint32_t b) const noexcept
{
    if (b >= idom_.size())
        return false;
    if (a == b)
        return true;
    for (int cur = idom_[b]; cur >= 0; cur = idom_[static_cast<size_t>(cur)])
    {
        if (static_cast<uint32_t>(cur) == a)
            return true;
        if (cur == idom_[static_cast<size_t>(cur)])
            break;
    }
    return false;
}

std::vector<bool> Cfg::reachable_from(uint32_t from) const
{
    std::vector<bool> seen(blocks.size(), false);
    std::vector<uint32_t> work{from};
    seen[from] = true;
    while (!work.empty())
    {
        const uint32_t b = work.back();
        work.pop_back();
        for (uint32_t s : blocks[b].succs)
            if (!seen[s])
            {
                seen[s] = true;
                work.push_back(s);
            }
    }
    return seen;
}

std::vector<uint32_t> Cfg::cycle_of(uint32_t block) const
{
    std::vector<uint32_t> out;
    const auto& succs = blocks[block].succs;
    const bool self_loop = std::find(succs.begin(), succs.end(), block) != succs.end();
    if (scc_size_[static_cast<size_t>(scc_[block])] < 2 && !self_loop)
        return out;
    for (uint32_t b = 0; b < blocks.size(); ++b)
        if (scc_[b] == scc_[block])
            out.push_back(b);
    return out;
}

Cfg build_cfg(const Program& program, std::vector<FunctionSig>& functions)
{
    Cfg cfg;
    const auto& ins = program.instructions();
    const size_t n = ins.size();

    // Leaders.
    std::vector<bool> leader(n, false);
    if (n > 0)
        leader[0] = true;
    for (size_t i = 0; i < n; ++i)
    {
        if (ins[i].op == Op::JUMPDEST)
            leader[i] = true;
        if (ends_block(ins[i].op) && i + 1 < n)
            leader[i + 1] = true;
    }

    cfg.block_of_index_.assign(n, 0);
    cfg.offset_to_block_.assign(program.code().size(), -1);
    for (size_t i = 0; i < n;)
    {
        size_t j = i;
        while (j + 1 < n && !leader[j + 1])
            ++j;
        BasicBlock bb;
        bb.id = static_cast<uint32_t>(cfg.blocks.size());
        bb.first = static_cast<uint32_t>(i);
        bb.last = static_cast<uint32_t>(j);
        bb.start_offset = ins[i].offset;
        bb.end_offset = ins[j].next_offset();
        for (size_t k = i; k <= j; ++k)
        {
            cfg.block_of_index_[k] = bb.id;
            cfg.offset_to_block_[ins[k].offset] = static_cast<int>(bb.id);
        }
        cfg.blocks.push_back(std::move(bb));
        i = j + 1;
    }

    // Successors.
    auto add_edge = [&](BasicBlock& from, uint32_t to) {
        if (std::find(from.succs.begin(), from.succs.end(), to) == from.succs.end())
            from.succs.push_back(to);
    };
    for (auto& bb : cfg.blocks)
    {
        const auto& tail = ins[bb.last];
        const bool has_next = bb.id + 1 < cfg.blocks.size();
        if (tail.op == Op::JUMP || tail.op == Op::JUMPI)
        {
            const auto target = local_jump_target(ins, bb.first, bb.last);
            if (target && program.is_jumpdest(*target))
                add_edge(bb, static_cast<uint32_t>(cfg.block_at(static_cast<uint32_t>(target->low64()))));
            else
                bb.unresolved_jump = true;
            if (tail.op == Op::JUMPI && has_next)
                add_edge(bb, bb.id + 1);
        }
        else if (!is_terminal(tail.op) && has_next)
            add_edge(bb, bb.id + 1);
    }
    for (const auto& bb : cfg.blocks)
        for (uint32_t s : bb.succs)
        {
            cfg.branch_edges.emplace_back(bb.id, s);
            cfg.blocks[s].preds.push_back(bb.id);
        }

    // Dominators (iterative, over reverse post-order from block 0).
    const size_t nb = cfg.blocks.size();
    cfg.idom_.assign(nb, -1);
    if (nb > 0)
    {
        std::vector<int> rpo_index(nb, -1);
        std::vector<uint32_t> order;
        {
            std::vector<std::pair<uint32_t, size_t>> stack{{0, 0}};
            std::vector<bool> seen(nb, false);
            seen[0] = true;
            while (!stack.empty())
            {
                auto& [b, k] = stack.back();
                if (k < cfg.blocks[b].succs.size())
                {
                    const uint32_t s = cfg.blocks[b].succs[k++];
                    if (!seen[s])
                    {
                        seen[s] = true;
                        stack.emplace_back(s, 0);
                    }
                }
                else
                {
                    order.push_back(b);
                    stack.pop_back();
                }
            }
            std::reverse(order.begin(), order.end());
            for (size_t i = 0; i < order.size(); ++i)
                rpo_index[order[i]] = static_cast<int>(i);
        }
        auto intersect = [&](int a, int b) {
            while (a != b)
            {
                while (rpo_index[static_cast<size_t>(a)] > rpo_index[static_cast<size_t>(b)])
                    a = cfg.idom_[static_cast<size_t>(a)];
                while (rpo_index[static_cast<size_t>(b)] > rpo_index[static_cast<size_t>(a)])
                    b = cfg.idom_[static_cast<size_t>(b)];
            }
            return a;
        };
        cfg.idom_[0] = 0;
        for (bool changed = true; changed;)
        {
            changed = false;
            for (size_t i = 1; i < order.size(); ++i)
            {
                const uint32_t b = order[i];
                int new_idom = -1;
                for (uint32_t p : cfg.blocks[b].preds)
                {
                    if (rpo_index[p] < 0 || cfg.idom_[p] < 0)
                        continue;
                    new_idom = new_idom < 0 ? static_cast<int>(p) : intersect(static_cast<int>(p), new_idom);
                }
                if (new_idom != cfg.idom_[b])
                {
                    cfg.idom_[b] = new_idom;
                    changed = true;
                }
            }
        }
        cfg.idom_[0] = -1;
    }

    // Strongly connected components (Tarjan, iterative).
    cfg.scc_.assign(nb, -1);
    {
        std::vector<int> index(nb, -1), low(nb, 0);
        std::vector<bool> on_stack(nb, false);
        std::vector<uint32_t> stk;
        int counter = 0;
        int comp = 0;
        for (uint32_t root = 0; root < nb; ++root)
        {
            if (index[root] >= 0)
                continue;
            std::vector<std::pair<uint32_t, size_t>> call{{root, 0}};
            index[root] = low[root] = counter++;
            stk.push_back(root);
            on_stack[root] = true;
            while (!call.empty())
            {
                auto& [v, k] = call.back();
                if (k < cfg.blocks[v].succs.size())
                {
                    const uint32_t w = cfg.blocks[v].succs[k++];
                    if (index[w] < 0)
                    {
                        index[w] = low[w] = counter++;
                        stk.push_back(w);
                        on_stack[w] = true;
                        call.emplace_back(w, 0);
                    }
                    else if (on_stack[w])
                        low[v] = std::min(low[v], index[w]);
                }
                else
                {
                    const uint32_t done = v;
                    call.pop_back();
                    if (!call.empty())
                        low[call.back().first] = std::min(low[call.back().first], low[done]);
                    if (low[done] == index[done])
                    {
                        size_t size = 0;
                        uint32_t w = 0;
                        do
                        {
                            w = stk.back();
                            stk.pop_back();
                            on_stack[w] = false;
                            cfg.scc_[w] = comp;
                            ++size;
                        } while (w != done);
                        cfg.scc_size_.push_back(size);
                        ++comp;
                    }
                }
            }
        }
    }

    // Selector dispatch.
    for (size_t i = 0; i + 4 < n; ++i)
    {
        if (ins[i].op == Op::DUP1 && ins[i + 1].byte == 0x63 && ins[i + 2].op == Op::EQ &&
            is_push(ins[i + 3].byte) && ins[i + 4].op == Op::JUMPI)
        {
            DispatchEntry d;
            std::copy(ins[i + 1].immediate.begin(), ins[i + 1].immediate.end(), d.selector.begin());
            const U256 target = ins[i + 3].push_value();
            if (!program.is_jumpdest(target))
                continue;
            d.target = static_cast<uint32_t>(target.low64());
            d.jumpi_offset = ins[i + 4].offset;
            cfg.dispatch.push_back(d);
        }
    }

    // Fill entries and body ranges.
    for (auto& fn : functions)
    {
        if (!fn.entry_offset)
        {
            for (const auto& d : cfg.dispatch)
                if (d.selector == fn.selector)
                {
                    fn.entry_offset = d.target;
                    break;
                }
        }
        if (fn.body_range || !fn.entry_offset)
            continue;
        const int entry = cfg.block_at(*fn.entry_offset);
        if (entry < 0)
            continue;
        uint32_t lo = UINT32_MAX, hi = 0;
        for (const auto& bb : cfg.blocks)
            if (cfg.dominates(static_cast<uint32_t>(entry), bb.id))
            {
                lo = std::min(lo, bb.start_offset);
                hi = std::max(hi, bb.end_offset);
            }
        if (lo < hi)
            fn.body_range = std::pair{lo, hi};
    }

    // Call edges: resolved jumps from one function's body into another's entry block.
    std::vector<std::pair<std::string, std::vector<uint32_t>>> owners;
    std::vector<bool> owned(nb, false);
    for (const auto& fn : functions)
    {
        if (!fn.body_range)
            continue;
        auto bs = body_blocks(cfg, fn);
        for (uint32_t b : bs)
            owned[b] = true;
        owners.emplace_back(fn.name, std::move(bs));
    }
    {
        std::vector<uint32_t> disp;
        for (uint32_t b = 0; b < nb; ++b)
            if (!owned[b])
                disp.push_back(b);
        owners.insert(owners.begin(), {std::string{dispatcher_name}, std::move(disp)});
    }
    for (const auto& [from, bs] : owners)
    {
        for (const auto& fn : functions)
        {
            if (fn.name == from || !fn.entry_offset)
                continue;
            const int entry = cfg.block_at(*fn.entry_offset);
            if (entry < 0)
                continue;
            bool hit = false;
            for (uint32_t b : bs)
                for (uint32_t s : cfg.blocks[b].succs)
                    hit = hit || s == static_cast<uint32_t>(entry);
            if (hit)
                cfg.call_edges.emplace_back(from, fn.name);
        }
    }
    return cfg;
}

std::vector<uint32_t> body_blocks(const Cfg& cfg, const FunctionSig& fn)
{
    std::vector<uint32_t> out;
    if (!fn.body_range)
        return out;
    for (const auto& bb : cfg.blocks)
        if (bb.start_offset >= fn.body_range->first && bb.start_offset < fn.body_range->second)
            out.push_back(bb.id);
    return out;
}

}  // namespace sctest::bytecode
