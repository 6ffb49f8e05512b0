// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include <sctest/coverage/bottleneck.hpp>
#include <sctest/coverage/report.hpp>
#include <sctest/evm/world.hpp>

#include <algorithm>
#include <sstream>

using namespace testing;
using namespace sctest::coverage;

namespace
{
CoverageMap run_all(const std::shared_ptr<const bytecode::ContractBundle>& b, const std::vector<evm::Transaction>& txs,
    bool monitor = true)
{
    CoverageMap map;
    auto w = evm::genesis_world(b);
    w.fallback_monitor = monitor;
    for (const auto& tx : txs)
        merge(map, *b, evm::execute_tx_inplace(w, tx).trace);
    return map;
}

size_t starred(const std::string& text)
{
    std::istringstream in{text};
    size_t n = 0;
    for (std::string line; std::getline(in, line);)
        n += line.rfind("* ", 0) == 0 ? 1 : 0;
    return n;
}

std::string line_of(const std::string& text, const std::string& needle)
{
    std::istringstream in{text};
    for (std::string line; std::getline(in, line);)
        if (line.find(needle) != std::string::npos)
            return line;
    return {};
}
}  // namespace

TEST_CASE("merge sets bits only at instruction starts")
{
    const auto b = fixture("trivial");
    CoverageMap map;
    const auto& code = b->program->instructions();
    const std::vector<uint32_t> trace{code[0].offset, code[1].offset, code[2].offset};
    CHECK(merge(map, *b, trace) == 3);
    CHECK(map.covered_count() == 3);
    CHECK(map.paths.size() == 1);

    // PUSH1 at 0 owns offset 1, so 1 is not an instruction start.
    const std::vector<uint32_t> bad{1};
    CHECK(merge(map, *b, bad) == 0);
    CHECK_FALSE(map.covered(b->genesis.contract_address, 1));
}

TEST_CASE("merge is idempotent, commutative and monotone")
{
    const auto b = fixture("gt10");
    auto w = evm::genesis_world(b);
    const auto t1 = evm::execute_tx(w, call(*b, "check", {word(3)})).second.trace;
    const auto t2 = evm::execute_tx(w, call(*b, "check", {word(30)})).second.trace;

    CoverageMap once, twice;
    merge(once, *b, t1);
    merge(twice, *b, t1);
    CHECK(merge(twice, *b, t1) == 0);
    CHECK(once == twice);

    CoverageMap ab, ba;
    merge(ab, *b, t1);
    const size_t before = ab.covered_count();
    merge(ab, *b, t2);
    CHECK(ab.covered_count() >= before);
    merge(ba, *b, t2);
    merge(ba, *b, t1);
    CHECK(ab == ba);
    // The two arms of the comparison give two distinct paths.
    CHECK(ab.paths.size() == 2);

    CoverageMap u1, u2;
    merge(u1, *b, t1);
    merge(u2, *b, t2);
    CoverageMap joined = u1;
    merge(joined, u2);
    CHECK(joined == ab);
}

TEST_CASE("path hash is FNV-1a over little-endian block ids")
{
    // Independent reference computed byte by byte.
    auto reference = [](const std::vector<uint32_t>& ids) {
        uint64_t h = 14695981039346656037ULL;
        for (uint32_t id : ids)
            for (int k = 0; k < 4; ++k)
            {
                h ^= static_cast<uint8_t>(id >> (8 * k));
                h *= 1099511628211ULL;
            }
        return h;
    };
    CHECK(path_hash(std::vector<uint32_t>{}) == 14695981039346656037ULL);
    CHECK(path_hash(std::vector<uint32_t>{0, 3, 0x01020304}) == reference({0, 3, 0x01020304}));
    std::vector<uint32_t> longer(max_path_blocks + 10, 7);
    std::vector<uint32_t> capped(max_path_blocks, 7);
    CHECK(path_hash(longer) == path_hash(capped));
}

TEST_CASE("coverage json round trip")
{
    const auto b = fixture("gt10");
    const auto map = run_all(b, {call(*b, "check", {word(3)}), call(*b, "check", {word(30)})});
    const auto text = to_json(map);
    CHECK(coverage_from_json(text) == map);
    CHECK(code_of([] { coverage_from_json("{\"contracts\": 3}"); }) == ErrorCode::SchemaError);
}

TEST_CASE("report stars covered source lines")
{
    const auto b = fixture("gt10");
    SUBCASE("zero coverage")
    {
        const auto r = render_report(*b, CoverageMap{});
        CHECK(r.from_source);
        CHECK(starred(r.text) == 0);
        CHECK(r.summary.instructions_covered == 0);
        CHECK(r.summary.instructions_total == b->program->instructions().size());
        CHECK(to_cov_file(r).rfind("COVERAGE v1 0/" + std::to_string(r.summary.instructions_total) + "\n", 0) == 0);
    }
    SUBCASE("every executable line starred once everything ran")
    {
        const auto map = run_all(b,
            {call(*b, "check", {word(3)}), call(*b, "check", {word(30)}),
                [&] {
                    auto tx = call(*b, "check", {word(0)});
                    tx.call_data[0] ^= 0xff;
                    return tx;
                }()},
            false);
        const auto r = render_report(*b, map);
        CHECK(r.summary.instructions_covered == r.summary.instructions_total);
        const auto hits = statement_hits(*b, map);
        CHECK(starred(r.text) == hits.size());
        CHECK(std::all_of(hits.begin(), hits.end(), [](const auto& kv) { return kv.second; }));
        CHECK(extract_bottlenecks(*b, map).empty());
        CHECK(extract_uncovered_functions(*b, map).empty());
    }
    SUBCASE("purity")
    {
        const auto map = run_all(b, {call(*b, "check", {word(3)})});
        CHECK(render_report(*b, map).text == render_report(*b, map).text);
        CHECK(to_cov_file(render_report(*b, map)) == to_cov_file(render_report(*b, map)));
        const auto r = render_report(*b, map);
        CHECK(starred(r.text) <= static_cast<size_t>(std::count(r.text.begin(), r.text.end(), '\n')));
    }
}

TEST_CASE("report falls back to disassembly without a linemap")
{
    const auto src = fixture("gt10");
    const auto b = std::make_shared<const bytecode::ContractBundle>(
        bytecode::ContractBundle::make("bare", src->program->code(), src->functions, std::nullopt, {}, src->genesis));
    CoverageMap map;
    const std::vector<uint32_t> trace{0, 2};
    merge(map, *b, trace);
    const auto r = render_report(*b, map);
    CHECK_FALSE(r.from_source);
    CHECK(starred(r.text) == 2);
    CHECK(r.text.rfind("* 0000: PUSH1 0x00\n", 0) == 0);
}

TEST_CASE("checkBalance bottleneck renders the cubic guard inside the loop")
{
    const auto b = fixture("l5_checkbalance");
    const auto map = run_all(b, {call(*b, "checkBalance", {items({8, 1, 1}), word(3)})});
    const auto bs = extract_bottlenecks(*b, map);
    const auto it = std::find_if(bs.begin(), bs.end(), [](const auto& x) { return x.function == "checkBalance"; });
    REQUIRE(it != bs.end());
    CHECK(it->constraint_text == "tickets[i] == amount*amount*amount");
    CHECK(it->features.has_nonlinear_term);
    CHECK(it->features.loop_guarded);
    CHECK_FALSE(it->features.has_keccak);
    CHECK_FALSE(it->features.storage_dependent);
    CHECK(it->inputs_involved == std::vector<std::string>{"tickets", "amount"});
    CHECK(it->line == 8);

    const auto un = extract_uncovered_functions(*b, map);
    REQUIRE(un.size() == 1);
    CHECK(un[0].status == FunctionStatus::partially_covered);
    CHECK(un[0].blocking.size() == 1);
    const auto text = render_uncovered(un);
    CHECK(text.find("checkBalance(uint256[] tickets, uint256 amount): partially covered") == 0);
    CHECK(text.find("tickets[i] == amount*amount*amount") != std::string::npos);
}

TEST_CASE("castVote guard is keccak dependent and blocks the internal call")
{
    const auto b = fixture("l1_castvote");
    const auto map = run_all(b, {call(*b, "castVote",
                                    {word(1), word(0xa1), bytecode::AbiValue::of_bytes({1, 2}),
                                        bytecode::AbiValue::zero(), bytecode::AbiValue::zero()})});
    const auto bs = extract_bottlenecks(*b, map);
    const auto it = std::find_if(bs.begin(), bs.end(), [](const auto& x) { return x.function == "castVote"; });
    REQUIRE(it != bs.end());
    CHECK(it->features.has_keccak);
    CHECK_FALSE(it->features.loop_guarded);
    CHECK(it->constraint_text == "voter + id == keccak256(msg.data[68:])");
    CHECK(it->inputs_involved == std::vector<std::string>{"id", "voter"});

    const auto r = render_report(*b, map);
    const auto call_line = line_of(r.text, "_castVoteInternal(id, voter);");
    REQUIRE_FALSE(call_line.empty());
    CHECK(call_line.rfind("  ", 0) == 0);
    CHECK(line_of(r.text, "function castVote").rfind("* ", 0) == 0);

    const auto un = extract_uncovered_functions(*b, map);
    REQUIRE(un.size() == 1);
    CHECK(un[0].sig.name == "castVote");
    CHECK(un[0].status == FunctionStatus::partially_covered);
}

TEST_CASE("validate loop predicate is loop guarded")
{
    const auto b = fixture("l2_validate");
    const auto map = run_all(b, {call(*b, "validate", {word(0xa1), items({0})})});
    const auto bs = extract_bottlenecks(*b, map);
    const auto it = std::find_if(bs.begin(), bs.end(), [](const auto& x) { return x.function == "validate"; });
    REQUIRE(it != bs.end());
    CHECK(it->features.loop_guarded);
    CHECK(it->features.has_nonlinear_term);
}

TEST_CASE("deposit guards depend on storage")
{
    const auto b = fixture("l3_dyad");
    const auto map = run_all(b, {call(*b, "mintDyad", {word(1), word(100)}),
                                    call(*b, "redeemable", {word(1), word(100)}),
                                    call(*b, "deposit", {word(0xa1), word(1), word(5)}, bob),
                                    call(*b, "prop_pool_backed", {})});
    const auto un = extract_uncovered_functions(*b, map);
    const auto it = std::find_if(un.begin(), un.end(), [](const auto& u) { return u.sig.name == "deposit"; });
    REQUIRE(it != un.end());
    CHECK(std::any_of(it->blocking.begin(), it->blocking.end(),
        [](const auto& x) { return x.features.storage_dependent && !x.to_revert; }));
}

TEST_CASE("functions never dispatched are fully uncovered and blocked by their selector")
{
    const auto b = fixture("disp3");
    const auto map = run_all(b, {call(*b, "f", {word(1)})});
    const auto un = extract_uncovered_functions(*b, map);
    REQUIRE(un.size() == 2);
    CHECK(un[0].sig.name == "g");
    CHECK(un[1].sig.name == "h");
    for (const auto& u : un)
    {
        CHECK(u.status == FunctionStatus::fully_uncovered);
        REQUIRE(u.blocking.size() == 1);
        std::ostringstream sel;
        sel << "msg.sig == 0x" << std::hex;
        sel.width(8);
        sel.fill('0');
        sel << bytecode::selector_word(u.sig.selector);
        CHECK(u.blocking[0].constraint_text == sel.str());
        for (const uint32_t off : u.uncovered_offsets)
        {
            CHECK(off >= u.sig.body_range->first);
            CHECK(off < u.sig.body_range->second);
        }
    }
    // g jumps into h's body, so calling g alone leaves nothing of h uncovered.
    const auto map2 = run_all(b, {call(*b, "f", {word(1)}), call(*b, "g", {word(1)})});
    CHECK(extract_uncovered_functions(*b, map2).empty());
}

TEST_CASE("uncovered functions agree with a brute-force oracle on every fixture")
{
    for (const char* name : {"trivial", "gt10", "disp3", "fig6_example", "l1_castvote", "l2_validate", "l3_dyad",
             "l5_checkbalance", "velocore", "pair_guard", "nested3"})
    {
        CAPTURE(name);
        const auto b = fixture(name);
        const auto& at = b->genesis.contract_address;
        // Every subset of functions called once with default arguments.
        const size_t n = b->functions.size();
        for (size_t mask = 0; mask < (size_t{1} << n); ++mask)
        {
            std::vector<evm::Transaction> txs;
            for (size_t i = 0; i < n; ++i)
                if (mask & (size_t{1} << i))
                {
                    std::vector<bytecode::AbiValue> args(b->functions[i].params.size(), bytecode::AbiValue::zero());
                    txs.push_back(call(*b, b->functions[i].name, args));
                }
            const auto map = run_all(b, txs);
            const auto un = extract_uncovered_functions(*b, map);
            for (const auto& fn : b->functions)
            {
                size_t covered = 0, total = 0;
                for (const uint32_t blk : bytecode::body_blocks(*b->cfg, fn))
                    for (uint32_t i = b->cfg->blocks[blk].first; i <= b->cfg->blocks[blk].last; ++i)
                    {
                        ++total;
                        covered += map.covered(at, b->program->instructions()[i].offset) ? 1 : 0;
                    }
                const auto it = std::find_if(un.begin(), un.end(), [&](const auto& u) { return u.sig.name == fn.name; });
                if (covered == total)
                    CHECK(it == un.end());
                else
                {
                    REQUIRE(it != un.end());
                    CHECK(it->uncovered_offsets.size() == total - covered);
                    CHECK((it->status == FunctionStatus::fully_uncovered) == (covered == 0));
                }
            }
        }
    }
}

TEST_CASE("function without a body range is rejected")
{
    const auto src = fixture("trivial");
    auto fns = src->functions;
    bytecode::FunctionSig ghost;
    ghost.name = "ghost";
    ghost.selector = bytecode::selector_of("ghost()");
    fns.push_back(ghost);
    const auto b = bytecode::ContractBundle::make("t", src->program->code(), fns, src->source, src->linemap, src->genesis);
    CHECK(code_of([&] { extract_uncovered_functions(b, CoverageMap{}); }) == ErrorCode::MissingBodyRange);
}
