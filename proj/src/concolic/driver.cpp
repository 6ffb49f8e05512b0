// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/concolic/concretize.hpp>
#include <sctest/concolic/driver.hpp>
#include <sctest/concolic/smt.hpp>
#include <sctest/concolic/solver.hpp>
#include <sctest/evm/snapshot.hpp>
#include <sctest/fuzzing/mutator.hpp>

#include <algorithm>
#include <set>

namespace sctest::concolic
{
namespace
{
using fuzzing::TestCase;

class Driver
{
public:
    Driver(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const coverage::CoverageMap& cov,
        const DriveBudget& budget, const DriveOptions& options)
      : bundle_{bundle}, world_{world}, budget_{budget}, options_{options}
    {
        out_.coverage = cov;
        if (options.snapshot_cache)
            cache_.emplace(options.snapshot_budget_bytes);
        preimages_ = options.preimages ? options.preimages : &local_preimages_;
    }

    DriveResult run(const fuzzing::Corpus& seeds)
    {
        if (seeds.entries.empty())
        {
            const auto target = fuzzing::seed_initial_target(bundle_.functions);
            const fuzzing::TargetContext ctx{bundle_, target};
            add_seed(ctx.seed_testcase());
        }
        for (const auto& e : seeds.entries)
            add_seed(e.tc);

        while (out_.stats.solver_calls < budget_.iterations)
        {
            const auto next = pick();
            if (!next)
                break;
            ConcolicState s = std::move(worklist_[*next]);
            worklist_.erase(worklist_.begin() + static_cast<std::ptrdiff_t>(*next));
            explore(s);
        }
        return std::move(out_);
    }

private:
    const bytecode::FunctionSig* symbolic_fn(const evm::Transaction& tx) const
    {
        if (tx.destination != bundle_.genesis.contract_address)
            return nullptr;
        const auto* fn = bundle_.function(tx.function_call);
        return fn && fn->params.size() == tx.args.size() ? fn : nullptr;
    }

    static evm::Transaction with_args(const bytecode::FunctionSig& fn, const evm::Transaction& tx,
        std::vector<AbiValue> args)
    {
        auto out = evm::make_tx(fn, std::move(args), tx.source, tx.destination, tx.value, tx.delay);
        out.gas = tx.gas;
        out.gas_price = tx.gas_price;
        return out;
    }

    SymTrace execute(const std::vector<evm::Transaction>& prefix, const evm::Transaction& tx)
    {
        return sym_execute(world_, prefix, tx, cache_ ? &*cache_ : nullptr, preimages_);
    }

    size_t merge(const evm::Transaction& tx, const evm::ExecResult& r)
    {
        if (tx.destination != bundle_.genesis.contract_address)
            return 0;
        return coverage::merge(out_.coverage, bundle_, r.trace);
    }

    bool emit(TestCase tc)
    {
        fuzzing::assign_id(tc);
        if (!emitted_.insert(tc.id).second)
            return false;
        out_.testcases.push_back(std::move(tc));
        return true;
    }

    void enqueue(const std::vector<evm::Transaction>& prefix, const evm::Transaction& tx, const SymTrace& t,
        size_t from, unsigned attempt)
    {
        for (size_t k = from; k < t.constraints.size(); ++k)
        {
            ConcolicState s;
            s.prefix = prefix;
            s.tx = tx;
            s.constraints.assign(t.constraints.begin(), t.constraints.begin() + static_cast<std::ptrdiff_t>(k) + 1);
            s.k = k;
            s.env = t.env;
            s.loop_attempt = attempt;
            s.seq = next_seq_++;
            if (tried_.count(signature(s)))
                continue;
            worklist_.push_back(std::move(s));
        }
    }

    /// Identifies the flip a state asks for: call site, path up to φ, and φ negated.
    Hash256 signature(const ConcolicState& s) const
    {
        Bytes buf;
        const auto key = evm::prefix_key(s.prefix);
        buf.insert(buf.end(), key.begin(), key.end());
        buf.insert(buf.end(), s.tx.function_call.begin(), s.tx.function_call.end());
        buf.push_back(0);
        for (size_t i = 0; i <= s.k; ++i)
        {
            const auto& c = s.constraints[i];
            for (int b = 0; b < 4; ++b)
                buf.push_back(static_cast<uint8_t>(c.branch_offset >> (8 * b)));
            buf.push_back(static_cast<uint8_t>(i == s.k ? !c.taken : c.taken));
        }
        return bytecode::keccak256(BytesView{buf.data(), buf.size()});
    }

    /// Executes one seed transaction symbolically, emitting nothing.
    void add_seed(const TestCase& original)
    {
        TestCase tc = original;
        std::vector<size_t> symbolic;
        for (size_t j = 0; j < tc.txs.size() && j <= budget_.depth; ++j)
        {
            const auto* fn = symbolic_fn(tc.txs[j]);
            if (!fn)
                continue;
            if (auto args = concretize_loop(*fn, tc.txs[j].args, 0); args && *args != tc.txs[j].args)
                tc.txs[j] = with_args(*fn, tc.txs[j], std::move(*args));
            symbolic.push_back(j);
        }
        for (const size_t j : symbolic)
        {
            const std::vector<evm::Transaction> prefix(tc.txs.begin(), tc.txs.begin() + static_cast<std::ptrdiff_t>(j));
            const auto t = execute(prefix, tc.txs[j]);
            merge(tc.txs[j], t.result);
            note_executed(prefix, tc.txs[j]);
            enqueue(prefix, tc.txs[j], t, 0, 0);
        }
        tc.origin.clear();
        emit(std::move(tc));
    }

    bool note_executed(const std::vector<evm::Transaction>& prefix, const evm::Transaction& tx)
    {
        Bytes buf;
        const auto key = evm::prefix_key(prefix);
        buf.insert(buf.end(), key.begin(), key.end());
        const auto k2 = evm::prefix_key({tx});
        buf.insert(buf.end(), k2.begin(), k2.end());
        return executed_.insert(bytecode::keccak256(BytesView{buf.data(), buf.size()})).second;
    }

    /// The block φ's flip would enter, or -1 when unknown.
    int flipped_successor(const PathConstraint& c) const
    {
        const int b = bundle_.cfg->block_at(c.branch_offset);
        if (b < 0)
            return -1;
        // The JUMPI ends its block: the fall-through successor is the next block.
        const auto& block = bundle_.cfg->blocks[static_cast<size_t>(b)];
        const uint32_t fall = static_cast<uint32_t>(b) + 1;
        if (c.taken)
            return std::count(block.succs.begin(), block.succs.end(), fall) ? static_cast<int>(fall) : -1;
        for (const auto s : block.succs)
            if (s != fall)
                return static_cast<int>(s);
        return -1;
    }

    bool block_covered(uint32_t b) const
    {
        return out_.coverage.covered(bundle_.genesis.contract_address, bundle_.cfg->blocks[b].start_offset);
    }

    std::optional<size_t> pick()
    {
        std::optional<size_t> best;
        size_t best_score = 0;
        std::vector<ConcolicState> keep;
        for (auto& s : worklist_)
        {
            const int succ = flipped_successor(s.target());
            if (succ >= 0 && block_covered(static_cast<uint32_t>(succ)))
                continue;
            if (tried_.count(signature(s)))
                continue;
            size_t score = 1;
            if (succ >= 0)
                for (const auto n : bundle_.cfg->blocks[static_cast<size_t>(succ)].succs)
                    score += block_covered(n) ? 0 : 1;
            if (!best || score > best_score)
            {
                best = keep.size();
                best_score = score;
            }
            keep.push_back(std::move(s));
        }
        worklist_ = std::move(keep);
        return best;
    }

    std::vector<SymRef> conjunction(const ConcolicState& s, bool pin_nonlinear) const
    {
        std::vector<SymRef> preds;
        for (size_t i = 0; i <= s.k; ++i)
        {
            auto p = i < s.k ? s.constraints[i].held() : s.constraints[i].flipped();
            p = concretize_keccak(p, s.env, preimages_);
            if (pin_nonlinear && !inputs_of(p).empty())
                p = concretize_nonlinear(p, s.env);
            for (auto& q : split_conjuncts(p))
                preds.push_back(std::move(q));
        }
        return preds;
    }

    void explore(const ConcolicState& s)
    {
        tried_.insert(signature(s));
        const auto* fn = symbolic_fn(s.tx);
        ++out_.stats.solver_calls;
        SolveOptions opt;
        opt.env = &s.env;
        auto preds = conjunction(s, true);
        auto r = solve(preds, opt);
        if (!r.sat())
        {
            // The pinned values may rule out every solution; small joint domains can still
            // be searched without pinning.
            auto raw = conjunction(s, false);
            if (!std::equal(raw.begin(), raw.end(), preds.begin(), preds.end()))
            {
                auto again = solve(raw, opt);
                if (again.sat() || r.status == SolverResult::Status::Unsat)
                {
                    r = std::move(again);
                    preds = std::move(raw);
                }
            }
        }
        switch (r.status)
        {
        case SolverResult::Status::Sat:
            ++out_.stats.sat;
            break;
        case SolverResult::Status::Unsat:
            ++out_.stats.unsat;
            break;
        case SolverResult::Status::Unknown:
            ++out_.stats.unknown;
            if (options_.emit_smt)
            {
                emit_smtlib(*options_.emit_smt, preds);
                ++out_.stats.smt_files;
            }
            break;
        }
        if (!r.sat())
        {
            escalate(s, *fn);
            return;
        }

        const auto tx = with_args(*fn, s.tx, apply_model(*fn, s.tx.args, r.model));
        note_executed(s.prefix, tx);
        const auto t = execute(s.prefix, tx);
        if (!follows(s, t))
        {
            ++out_.stats.divergences;
            return;
        }
        merge(tx, t.result);
        TestCase tc;
        tc.txs = s.prefix;
        tc.txs.push_back(tx);
        emit(std::move(tc));
        enqueue(s.prefix, tx, t, s.k + 1, s.loop_attempt);
    }

    static bool follows(const ConcolicState& s, const SymTrace& t)
    {
        if (t.constraints.size() <= s.k)
            return false;
        for (size_t i = 0; i <= s.k; ++i)
        {
            const auto& want = s.constraints[i];
            const auto& got = t.constraints[i];
            const bool dir = i == s.k ? !want.taken : want.taken;
            if (got.branch_offset != want.branch_offset || got.taken != dir)
                return false;
        }
        return true;
    }

    /// Retries the call with longer dynamic arguments after a failed solve.
    void escalate(const ConcolicState& s, const bytecode::FunctionSig& fn)
    {
        for (unsigned attempt = s.loop_attempt + 1;; ++attempt)
        {
            auto args = concretize_loop(fn, s.tx.args, attempt);
            if (!args)
                return;
            if (*args == s.tx.args)
                continue;
            const auto tx = with_args(fn, s.tx, std::move(*args));
            if (!note_executed(s.prefix, tx))
                return;
            ++out_.stats.escalations;
            const auto t = execute(s.prefix, tx);
            if (merge(tx, t.result) > 0)
            {
                TestCase tc;
                tc.txs = s.prefix;
                tc.txs.push_back(tx);
                emit(std::move(tc));
            }
            enqueue(s.prefix, tx, t, 0, attempt);
            return;
        }
    }

    const bytecode::ContractBundle& bundle_;
    const evm::EvmWorld& world_;
    DriveBudget budget_;
    DriveOptions options_;
    std::optional<evm::SnapshotCache> cache_;
    PreimageTable local_preimages_;
    PreimageTable* preimages_ = nullptr;
    DriveResult out_;
    std::vector<ConcolicState> worklist_;
    std::set<Hash256> tried_;
    std::set<Hash256> executed_;
    std::set<std::string> emitted_;
    uint64_t next_seq_ = 0;
};
}  // namespace

DriveResult drive(const bytecode::ContractBundle& bundle, const evm::EvmWorld& world, const fuzzing::Corpus& seeds,
    const coverage::CoverageMap& coverage, const DriveBudget& budget, const DriveOptions& options)
{
    Driver d{bundle, world, coverage, budget, options};
    return d.run(seeds);
}

}  // namespace sctest::concolic
