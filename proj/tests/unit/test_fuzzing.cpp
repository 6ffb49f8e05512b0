// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include <sctest/coverage/bottleneck.hpp>
#include <sctest/evm/world.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/fuzzing/detectors.hpp>
#include <sctest/fuzzing/target.hpp>

#include <set>

using namespace testing;
using namespace sctest::fuzzing;

namespace
{
const char* const deposit_target = R"(target test_deposit
alias A = 0x00000000000000000000000000000000000000a1
alias B = 0x00000000000000000000000000000000000000b2
order fixed
setup:
  call mintDyad(1, 100) from A
  call redeemable(1, 100) from A
fuzz:
  call deposit(A, ?id:uint256=1, ?value:uint256=1) from B
)";

std::vector<CompileCode> codes(const ParseResult& r)
{
    std::vector<CompileCode> out;
    for (const auto& e : r.errors)
        out.push_back(e.code);
    return out;
}

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

std::set<uint32_t> covered_offsets(const coverage::CoverageMap& map, const Address& at)
{
    std::set<uint32_t> out;
    const auto it = map.bits.find(at);
    if (it != map.bits.end())
        for (uint32_t off = 0; off < it->second.size(); ++off)
            if (it->second[off])
                out.insert(off);
    return out;
}
}  // namespace

TEST_CASE("deposit target compiles")
{
    const auto b = fixture("l3_dyad");
    const auto r = parse_target(deposit_target, b->functions);
    REQUIRE(r.ok());
    const auto& t = *r.target;
    CHECK(t.name == "test_deposit");
    CHECK(t.order == OrderMode::fixed);
    CHECK(t.aliases.size() == 2);
    CHECK(t.setup.size() == 2);
    REQUIRE(t.fuzz.size() == 1);
    CHECK(t.fuzz[0].sender == "B");
    CHECK(t.fuzz[0].mutable_params() == std::vector<std::string>{"id", "value"});
    CHECK(t.fuzz[0].args[0].alias == std::optional<std::string>{"A"});
    CHECK(t.fuzz[0].args[2].value.word == U256{1});
}

TEST_CASE("unknown function is E001 at the name")
{
    const auto b = fixture("l3_dyad");
    const auto r = parse_target(replace(deposit_target, "call redeemable", "call reemable"), b->functions);
    REQUIRE(r.errors.size() == 1);
    CHECK(r.errors[0].code == CompileCode::E001);
    CHECK(r.errors[0].line == 7);
    CHECK(r.errors[0].col == 8);
    CHECK(!r.target);
    CHECK(render_error(r.errors[0]).rfind("E001 7:8 ", 0) == 0);
}

TEST_CASE("arity mismatch is E002")
{
    const auto b = fixture("l3_dyad");
    const auto r = parse_target(replace(deposit_target, "deposit(A, ?id:uint256=1, ", "deposit(A, "), b->functions);
    CHECK(codes(r) == std::vector<CompileCode>{CompileCode::E002});
    CHECK(r.errors[0].line == 9);
}

TEST_CASE("type mismatch, unknown alias and range errors")
{
    const auto b = fixture("l3_dyad");
    CHECK(codes(parse_target(replace(deposit_target, "?value:uint256=1", "?value:bool=true"), b->functions)) ==
          std::vector<CompileCode>{CompileCode::E003});
    CHECK(codes(parse_target(replace(deposit_target, "mintDyad(1, 100)", "mintDyad(true, 100)"), b->functions)) ==
          std::vector<CompileCode>{CompileCode::E003});
    CHECK(codes(parse_target(replace(deposit_target, "?value:uint256", "?amount:uint256"), b->functions)) ==
          std::vector<CompileCode>{CompileCode::E003});
    CHECK(codes(parse_target(replace(deposit_target, "from B", "from C"), b->functions)) ==
          std::vector<CompileCode>{CompileCode::E004});
    CHECK(codes(parse_target(replace(deposit_target, "deposit(A,", "deposit(Z,"), b->functions)) ==
          std::vector<CompileCode>{CompileCode::E004});
    const std::string big = "1" + std::string(78, '0');
    CHECK(codes(parse_target(replace(deposit_target, "mintDyad(1,", "mintDyad(" + big + ","), b->functions)) ==
          std::vector<CompileCode>{CompileCode::E005});
}

TEST_CASE("every error is reported in source order")
{
    const auto b = fixture("l3_dyad");
    auto text = replace(deposit_target, "call redeemable", "call reemable");
    text = replace(text, "mintDyad(1, 100) from A", "mintDyad(1) from A");
    text = replace(text, "from B", "from C");
    const auto r = parse_target(text, b->functions);
    CHECK(codes(r) == std::vector<CompileCode>{CompileCode::E002, CompileCode::E001, CompileCode::E004});
    CHECK(r.errors[0].line == 6);
    CHECK(r.errors[1].line == 7);
    CHECK(r.errors[2].line == 9);
    const auto all = render_errors(r.errors);
    CHECK(std::count(all.begin(), all.end(), '\n') >= 2);
}

TEST_CASE("syntax errors are E000")
{
    const auto b = fixture("l3_dyad");
    CHECK(codes(parse_target("", b->functions)) == std::vector<CompileCode>{CompileCode::E000});
    CHECK(codes(parse_target(replace(deposit_target, "  call deposit", "call deposit"), b->functions)).front() ==
          CompileCode::E000);
    CHECK(codes(parse_target(replace(deposit_target, "mintDyad(1, 100)", "mintDyad(?id:uint256=1, 100)"),
              b->functions)) == std::vector<CompileCode>{CompileCode::E000});
    CHECK(!parse_target("target t\nfuzz:\n", b->functions).ok());
}

TEST_CASE("render_target round-trips")
{
    const auto b = fixture("l3_dyad");
    auto t = *parse_target(deposit_target, b->functions).target;
    t.order = OrderMode::shuffle;
    t.setup[0].value = U256{7};
    t.setup[1].delay = 60;
    const auto text = render_target(t, b->functions);
    const auto back = parse_target(text, b->functions);
    REQUIRE_MESSAGE(back.ok(), render_errors(back.errors));
    auto strip = [](FuzzTarget x) {
        for (auto* part : {&x.setup, &x.fuzz})
            for (auto& c : *part)
                c.line = 0;
        return x;
    };
    CHECK(strip(*back.target) == strip(t));
    CHECK(render_target(*back.target, b->functions) == text);
}

TEST_CASE("initial target covers every action with zero seeds")
{
    const auto b = fixture("l3_dyad");
    const auto t = seed_initial_target(b->functions);
    CHECK(t.order == OrderMode::shuffle);
    CHECK(t.setup.empty());
    REQUIRE(t.fuzz.size() == 3);  // prop_pool_backed is a property
    for (const auto& c : t.fuzz)
    {
        CHECK(c.function != "prop_pool_backed");
        for (const auto& a : c.args)
        {
            CHECK(a.is_mutable);
            CHECK(a.value.word.is_zero());
        }
    }
    CHECK(t.fuzz[2].mutable_params() == std::vector<std::string>{"from", "id", "value"});
    CHECK(parse_target(render_target(t, b->functions), b->functions).ok());
    CHECK(code_of([] { seed_initial_target({}); }) == ErrorCode::EmptyAbi);
}

TEST_CASE("boundary values for uint8")
{
    const auto v = boundary_values(8, U256{5});
    const std::set<U256> got(v.begin(), v.end());
    CHECK(got == std::set<U256>{U256{0}, U256{1}, U256{255}, U256{128}, U256{4}, U256{6}});

    Rng rng{3};
    std::set<U256> seen;
    for (int i = 0; i < 1000; ++i)
        seen.insert(mutate_word(U256{9}, 8, U256{5}, WordMutation::boundary, rng));
    CHECK(seen == got);
    for (int i = 0; i < 1000; ++i)
    {
        CHECK(mutate_word(U256{9}, 8, U256{5}, WordMutation::random, rng) <= U256{255});
        CHECK(mutate_word(U256{255}, 8, U256{5}, WordMutation::bit_flip, rng) <= U256{255});
    }
}

TEST_CASE("fixed arguments never change under mutation")
{
    const auto b = fixture("l3_dyad");
    const auto t = *parse_target(deposit_target, b->functions).target;
    const TargetContext ctx{*b, t};
    auto tc = ctx.seed_testcase();
    const auto setup = ctx.setup_txs();
    Rng rng{11};
    std::vector<TestCase> kept{tc};
    for (int i = 0; i < 10000; ++i)
    {
        std::vector<const TestCase*> pool;
        for (const auto& k : kept)
            pool.push_back(&k);
        auto next = mutate(tc, ctx, rng, pool);
        REQUIRE(next.txs.size() >= setup.size());
        for (size_t s = 0; s < setup.size(); ++s)
            CHECK(next.txs[s] == setup[s]);
        for (size_t k = setup.size(); k < next.txs.size(); ++k)
        {
            const auto& tx = next.txs[k];
            REQUIRE(tx.function_call == "deposit");
            CHECK(tx.args[0].word == addr("0xa1").to_word());
            CHECK(tx.source == addr("0xb2"));
        }
        if (i % 500 == 0)
            kept.push_back(next);
        tc = std::move(next);
    }
}

TEST_CASE("mutation is deterministic per seed")
{
    const auto b = fixture("l1_castvote");
    const auto t = seed_initial_target(b->functions);
    const TargetContext ctx{*b, t};
    auto run = [&](uint64_t seed) {
        Rng rng{seed};
        auto tc = ctx.seed_testcase();
        std::vector<std::string> ids;
        for (int i = 0; i < 200; ++i)
        {
            tc = mutate(tc, ctx, rng, {});
            ids.push_back(tc.id);
        }
        return ids;
    };
    CHECK(run(5) == run(5));
    CHECK(run(5) != run(6));
}

TEST_CASE("gt10 campaign finds the assert")
{
    const auto b = fixture("gt10");
    const auto r = run_campaign(b, evm::genesis_world(b), seed_initial_target(b->functions), {1000, 0}, 42);
    REQUIRE(r.bugs.findings.size() == 1);
    const auto& f = r.bugs.findings[0];
    CHECK(f.kind == FindingKind::assert_failure);
    CHECK(f.function == "check");
    const auto* tc = r.bugs.testcase(f.testcase_id);
    REQUIRE(tc != nullptr);
    CHECK(tc->txs.back().args[0].word > U256{10});
    CHECK(r.execs == 1000);
    CHECK(r.history.size() == 1);

    // The witness replays to the same finding.
    const auto again = replay(*b, evm::genesis_world(b), std::vector<TestCase>{*tc});
    REQUIRE(again.bugs.findings.size() == 1);
    CHECK(again.bugs.findings[0].same_bug(f));
}

TEST_CASE("campaigns are reproducible")
{
    const auto b = fixture("l3_dyad");
    const auto t = *parse_target(deposit_target, b->functions).target;
    auto ids = [](const CampaignResult& r) {
        std::vector<std::string> out;
        for (const auto& e : r.corpus.entries)
            out.push_back(e.tc.id);
        return out;
    };
    const auto r1 = run_campaign(b, evm::genesis_world(b), t, {3000, 0}, 9);
    const auto r2 = run_campaign(b, evm::genesis_world(b), t, {3000, 0}, 9);
    CHECK(ids(r1) == ids(r2));
    CHECK(r1.coverage == r2.coverage);
    CHECK(r1.bugs.findings == r2.bugs.findings);
    CHECK(r1.history == r2.history);
}

TEST_CASE("l3 deposit target reaches the assert")
{
    const auto b = fixture("l3_dyad");
    const auto t = *parse_target(deposit_target, b->functions).target;
    const auto r = run_campaign(b, evm::genesis_world(b), t, {5000, 0}, 1);
    std::set<FindingKind> kinds;
    for (const auto& f : r.bugs.findings)
        kinds.insert(f.kind);
    CHECK(kinds.count(FindingKind::assert_failure) == 1);
}

TEST_CASE("l1 campaign stays blocked")
{
    const auto b = fixture("l1_castvote");
    const auto r = run_campaign(b, evm::genesis_world(b), seed_initial_target(b->functions), {20000, 0}, 42);
    CHECK(r.bugs.findings.empty());
    const auto fns = coverage::extract_uncovered_functions(*b, r.coverage);
    REQUIRE(fns.size() == 1);
    CHECK(fns[0].status == coverage::FunctionStatus::partially_covered);
}

TEST_CASE("detectors")
{
    const auto b = fixture("gt10");
    auto w = evm::genesis_world(b);
    const auto bad = evm::execute_tx_inplace(w, call(*b, "check", {word(11)}));
    const auto found = detect_bugs(bad, "check", w, *b);
    REQUIRE(found.size() == 1);
    CHECK(found[0].kind == FindingKind::assert_failure);
    CHECK(found[0].pc == bad.halt_pc);
    CHECK(found[0].function == "check");
    const auto good = evm::execute_tx_inplace(w, call(*b, "check", {word(10)}));
    CHECK(detect_bugs(good, "check", w, *b).empty());

    const auto d = fixture("l3_dyad");
    auto dw = evm::genesis_world(d);
    CHECK(detect_property_violations(dw, *d).empty());
    dw.sstore(d->genesis.contract_address, U256{0}, U256{5});  // poolBal above minted
    const auto v = detect_property_violations(dw, *d);
    REQUIRE(v.size() == 1);
    CHECK(v[0].kind == FindingKind::property_violation);
    CHECK(v[0].function == "prop_pool_backed");
    // The check ran on a copy.
    CHECK(dw.sload(d->genesis.contract_address, U256{0}) == U256{5});
}

TEST_CASE("the three Example inputs cover every branch")
{
    const auto b = fixture("fig6_example");
    std::vector<TestCase> tcs;
    for (const auto& [x, y, z] : std::vector<std::tuple<int, int, int>>{{1, 3, 10}, {1, 2, 10}, {1, 2, 4}})
    {
        TestCase tc;
        tc.txs.push_back(call(*b, "Example", {word(x), word(y), word(z)}));
        assign_id(tc);
        tcs.push_back(tc);
    }
    const auto r = replay(*b, evm::genesis_world(b), tcs);
    CHECK(r.stale.empty());
    CHECK(r.bugs.findings.empty());
    const auto bn = coverage::extract_bottlenecks(*b, r.coverage);
    for (const auto& x : bn)
        CHECK_MESSAGE(x.function.empty(), x.constraint_text);
    CHECK(coverage::extract_uncovered_functions(*b, r.coverage).empty());

    // Each input alone leaves a branch open.
    for (const auto& tc : tcs)
        CHECK(!coverage::extract_uncovered_functions(*b, replay(*b, evm::genesis_world(b), {tc}).coverage).empty());
}

TEST_CASE("replay of an empty corpus covers nothing")
{
    const auto b = fixture("gt10");
    const auto r = replay(*b, evm::genesis_world(b), Corpus{});
    CHECK(r.coverage.covered_count() == 0);
    CHECK(r.coverage.paths.empty());
    CHECK(r.bugs.findings.empty());
}

TEST_CASE("corpus replays to the campaign coverage and is minimal")
{
    for (const char* name : {"l3_dyad", "l2_validate", "fig6_example"})
    {
        CAPTURE(name);
        const auto b = fixture(name);
        const auto world = evm::genesis_world(b);
        const auto r = run_campaign(b, world, seed_initial_target(b->functions), {3000, 0}, 7);
        const auto again = replay(*b, world, r.corpus);
        CHECK(again.stale.empty());
        const auto at = b->genesis.contract_address;
        CHECK(covered_offsets(again.coverage, at) == covered_offsets(r.coverage, at));

        // Dropping any single entry loses an instruction or a path.
        for (size_t skip = 0; skip < r.corpus.entries.size(); ++skip)
        {
            Corpus smaller = r.corpus;
            smaller.entries.erase(smaller.entries.begin() + static_cast<std::ptrdiff_t>(skip));
            const auto cov = replay(*b, world, smaller).coverage;
            CHECK((cov.covered_count() < again.coverage.covered_count() ||
                   cov.paths.size() < again.coverage.paths.size()));
        }
    }
}

TEST_CASE("campaign keeps coverage across target changes")
{
    const auto b = fixture("l3_dyad");
    Campaign c{b, evm::genesis_world(b), seed_initial_target(b->functions), 3};
    c.run(500);
    const auto before = c.coverage().covered_count();
    const auto corpus_before = c.corpus().entries.size();
    c.install_target(*parse_target(deposit_target, b->functions).target);
    CHECK(c.coverage().covered_count() >= before);
    CHECK(c.corpus().entries.size() >= corpus_before);
    c.run(500);
    CHECK(c.coverage().covered_count() >= before);
    CHECK(c.execs() == 1000);

    FuzzTarget bad = c.target();
    bad.fuzz[0].function = "nope";
    CHECK(code_of([&] { c.install_target(bad); }) == ErrorCode::InvalidTarget);
}

TEST_CASE("add_testcase keeps inputs that add coverage")
{
    const auto b = fixture("gt10");
    Campaign c{b, evm::genesis_world(b), seed_initial_target(b->functions), 1};
    c.run(1);
    const auto base = c.coverage().covered_count();
    TestCase tc;
    tc.txs.push_back(call(*b, "check", {word(11)}));
    CHECK(c.add_testcase(tc) > 0);
    CHECK(c.coverage().covered_count() > base);
    CHECK(c.bugs().findings.size() == 1);
    CHECK(c.add_testcase(tc) == 0);
}

TEST_CASE("test case and findings JSON round-trip")
{
    const auto b = fixture("l1_castvote");
    TestCase tc;
    tc.txs.push_back(evm::make_tx(*b->function("castVote"),
        {word(7), AbiValue::of_word(addr("0xb2").to_word()), AbiValue::of_bytes({1, 2, 3}), AbiValue::of_bytes({}),
            AbiValue::of_bytes({0xff})},
        alice, b->genesis.contract_address, U256{5}, 30));
    assign_id(tc);
    CHECK(tc.id.size() == 16);
    const auto back = testcase_from_json(testcase_to_json(tc, *b), *b);
    CHECK(back == tc);

    BugReport bugs;
    bugs.add({FindingKind::assert_failure, 42, "castVote", "", "assert", 9}, tc);
    CHECK(!bugs.add({FindingKind::assert_failure, 42, "castVote", "", "again", 9}, tc));
    const auto j = findings_to_json(bugs, *b);
    const auto r = findings_from_json(j, *b);
    CHECK(r.findings == bugs.findings);
    CHECK(r.testcases == bugs.testcases);
    CHECK(code_of([&] { testcase_from_json("{\"txs\":[{\"function\":\"nope\",\"args\":[]}]}", *b); }) ==
          ErrorCode::SchemaError);
    CHECK(code_of([&] { testcase_from_json("not json", *b); }) == ErrorCode::SchemaError);
}

TEST_CASE("array and bool arguments serialize as JSON arrays and booleans")
{
    const auto b = fixture("l5_checkbalance");
    const auto* fn = b->actions().front();
    std::vector<AbiValue> args;
    for (const auto& p : fn->params)
        args.push_back(p.kind == AbiType::Kind::uint_array ? items({U256{1}, U256{2}}) : word(3));
    TestCase tc;
    tc.txs.push_back(evm::make_tx(*fn, args, alice, b->genesis.contract_address, {}, 0));
    assign_id(tc);
    const auto text = testcase_to_json(tc, *b);
    CHECK(testcase_from_json(text, *b) == tc);
}

TEST_CASE("corpus directory round-trip")
{
    const auto b = fixture("gt10");
    const auto r = run_campaign(b, evm::genesis_world(b), seed_initial_target(b->functions), {300, 0}, 2);
    const auto dir = std::filesystem::temp_directory_path() / "sctest_corpus_rt";
    std::filesystem::remove_all(dir);
    write_corpus(r.corpus, *b, dir);
    const auto back = read_corpus(dir, *b);
    CHECK(back.entries.size() == r.corpus.entries.size());
    const auto cov = replay(*b, evm::genesis_world(b), back).coverage;
    CHECK(cov.covered_count() == r.coverage.covered_count());
    std::filesystem::remove_all(dir);
    CHECK(code_of([&] { read_corpus(dir, *b); }) == ErrorCode::BundleLoad);
}
