// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include <sctest/coverage/report.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/orchestrator/generator.hpp>
#include <sctest/orchestrator/labeling.hpp>
#include <sctest/orchestrator/pipeline.hpp>

#include <json.hpp>

#include <fstream>
#include <sstream>

using namespace testing;
using namespace sctest::orchestrator;
using sctest::models::StubClient;

namespace
{
std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in{p, std::ios::binary};
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

PipelineConfig quick(uint64_t seed = 42)
{
    PipelineConfig cfg;
    cfg.rng_seed = seed;
    cfg.time_budget_s = 120;
    return cfg;
}

fuzzing::Campaign short_campaign(const std::shared_ptr<const bytecode::ContractBundle>& b, uint64_t execs,
    uint64_t seed = 1)
{
    fuzzing::Campaign c{b, evm::genesis_world(b), fuzzing::seed_initial_target(b->functions), seed};
    c.run(execs);
    return c;
}

bool has_finding(const fuzzing::BugReport& bugs, const fuzzing::Finding& f)
{
    return std::any_of(bugs.findings.begin(), bugs.findings.end(), [&](const auto& g) { return g.same_bug(f); });
}

void check_report_invariants(const std::shared_ptr<const bytecode::ContractBundle>& b, const RunReport& rep)
{
    bool after_concolic = false;
    for (const auto& d : rep.decisions)
    {
        CHECK_FALSE(after_concolic);
        after_concolic = d.route != Route::generator;
        CHECK(d.coverage_after >= d.coverage_before);
        CHECK(d.bugs_after >= d.bugs_before);
    }
    for (size_t i = 1; i < rep.decisions.size(); ++i)
        CHECK(rep.decisions[i].execs > rep.decisions[i - 1].execs);

    const auto world = evm::genesis_world(b);
    const auto replayed = fuzzing::replay(*b, world, rep.corpus);
    CHECK(replayed.stale.empty());
    for (const auto& [addr, bits] : rep.coverage.bits)
        for (uint32_t off = 0; off < bits.size(); ++off)
            if (bits[off])
                CHECK(replayed.coverage.covered(addr, off));

    for (size_t i = 0; i < rep.bugs.findings.size(); ++i)
    {
        const auto& f = rep.bugs.findings[i];
        const auto* tc = rep.bugs.testcase(f.testcase_id);
        REQUIRE(tc != nullptr);
        CHECK(has_finding(fuzzing::replay(*b, world, std::vector<fuzzing::TestCase>{*tc}).bugs, f));
    }
}
}  // namespace

TEST_SUITE("orchestrator")
{
    TEST_CASE("detect_plateau")
    {
        std::vector<size_t> h{10};
        for (int i = 0; i < 10; ++i)
            h.push_back(12);
        CHECK(detect_plateau(h, 10));
        CHECK_FALSE(detect_plateau({1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 11, 12}, 10));
        CHECK_FALSE(detect_plateau({5, 7, 7, 7, 7, 7, 7, 7, 7, 7}, 10));
        CHECK_FALSE(detect_plateau({7, 7, 7, 7, 7, 7, 7, 7, 7}, 10));
        CHECK(detect_plateau({7}, 1));
        CHECK_FALSE(detect_plateau({}, 1));
    }

    TEST_CASE("heuristic forecast follows the blocking features")
    {
        const auto l2 = fixture("l2_validate");
        const auto u2 = routable_uncovered(*l2, short_campaign(l2, 100, 42).coverage());
        REQUIRE_FALSE(u2.empty());
        CHECK(std::any_of(u2[0].blocking.begin(), u2[0].blocking.end(),
            [](const auto& b) { return b.features.loop_guarded; }));
        CHECK(heuristic_forecast(u2) == Forecast::Generator);

        const auto l3 = fixture("l3_dyad");
        CHECK(heuristic_forecast(routable_uncovered(*l3, short_campaign(l3, 2000).coverage())) == Forecast::Generator);

        coverage::UncoveredFunction product;
        product.sig.name = "f";
        coverage::BranchConstraintInfo b;
        b.constraint_text = "input == p*r";
        b.features.has_nonlinear_term = true;
        product.blocking.push_back(b);
        CHECK(heuristic_forecast({product}) == Forecast::Concolic);

        const auto l1 = fixture("l1_castvote");
        CHECK(heuristic_forecast(routable_uncovered(*l1, short_campaign(l1, 1000).coverage())) == Forecast::Concolic);

        CHECK(code_of([] { heuristic_forecast({}); }) == ErrorCode::EmptyInput);
    }

    TEST_CASE("property functions are not routable")
    {
        const auto b = fixture("l3_dyad");
        const auto c = short_campaign(b, 2000);
        const auto all = coverage::extract_uncovered_functions(*b, c.coverage());
        const auto routable = routable_uncovered(*b, c.coverage());
        CHECK(std::any_of(all.begin(), all.end(), [](const auto& u) { return u.sig.is_property; }));
        CHECK(std::none_of(routable.begin(), routable.end(), [](const auto& u) { return u.sig.is_property; }));
    }

    TEST_CASE("forecast features")
    {
        const auto b = fixture("l1_castvote");
        const auto c = short_campaign(b, 500);
        const auto f = build_forecast_features(*b, c.coverage(), c.bugs());
        CHECK(f.source == *b->source);
        CHECK(f.coverage_report == coverage::render_report(*b, c.coverage()).text);
        CHECK(f.bug_report == "none");
        CHECK(f.uncovered_functions.find("castVote(") != std::string::npos);
        CHECK_FALSE(f.ground_truth.has_value());
        CHECK(build_forecast_features(*b, c.coverage(), c.bugs()) == f);
    }

    TEST_CASE("model forecasts fall back to the heuristic")
    {
        const auto b = fixture("l1_castvote");
        const auto c = short_campaign(b, 500);
        const auto features = build_forecast_features(*b, c.coverage(), c.bugs());
        const auto uncovered = routable_uncovered(*b, c.coverage());

        StubClient says_one{{{"*", {"The best way is: 1"}}}};
        const auto m = forecast(&says_one, features, uncovered);
        CHECK(m.value == Forecast::Generator);
        CHECK(m.source == "model");
        REQUIRE(says_one.prompts().size() == 1);
        CHECK(says_one.prompts()[0].find("Please generate 0 or 1 only") != std::string::npos);

        StubClient rambles{{{"*", {"maybe"}}}};
        const auto h = forecast(&rambles, features, uncovered);
        CHECK(h.value == Forecast::Concolic);
        CHECK(h.source.find("heuristic (fallback") == 0);
        CHECK(h.raw == "maybe");

        StubClient silent{{}};
        CHECK(forecast(&silent, features, uncovered).value == Forecast::Concolic);
        CHECK(forecast(nullptr, features, uncovered).source == "heuristic");
    }

    TEST_CASE("value answers become targets")
    {
        const auto b = fixture("l5_checkbalance");
        coverage::UncoveredFunction u;
        u.sig = *b->function("checkBalance");
        const auto named = value_answer_to_target(u, "amount = 2 and tickets = [8,1,1]");
        REQUIRE(named);
        CHECK(*named ==
              "target value_checkBalance\norder fixed\nfuzz:\n  call checkBalance(?tickets:uint256[]=[8, 1, 1], "
              "?amount:uint256=2)\n");
        CHECK(fuzzing::parse_target(*named, b->functions).ok());
        CHECK(value_answer_to_target(u, "Use [8, 1, 1] with 2.") == named);
        CHECK_FALSE(value_answer_to_target(u, "tickets: [8, 1, 1]").has_value());
        CHECK_FALSE(value_answer_to_target(u, "I cannot tell").has_value());
    }

    TEST_CASE("generator route with a value answer")
    {
        const auto b = fixture("l5_checkbalance");
        const auto c = short_campaign(b, 20, 3);
        const auto uncovered = routable_uncovered(*b, c.coverage());
        REQUIRE(uncovered.size() == 1);
        StubClient stub{{{"*", {"tickets = [8, 1, 1], amount = 2"}}}};
        const auto gen = generate_target(stub, c, b, uncovered, 5);
        CHECK(gen.prompts == std::vector<std::string>{"value:checkBalance"});
        REQUIRE(gen.runs.size() == 1);
        CHECK(gen.runs[0].validations() == 1);
        REQUIRE(gen.target);
        CHECK(gen.target->fuzz.size() == 1);
        CHECK(stub.prompts()[0].find("restrictive condition") != std::string::npos);
    }

    TEST_CASE("L1 with the heuristic routes to concolic and finds the assert")
    {
        const auto b = fixture("l1_castvote");
        const auto rep = run(b, quick());
        REQUIRE(rep.decisions.size() == 1);
        CHECK(rep.decisions[0].forecast.value == Forecast::Concolic);
        CHECK(rep.decisions[0].route == Route::concolic);
        REQUIRE(rep.bugs.findings.size() == 1);
        CHECK(rep.bugs.findings[0].kind == fuzzing::FindingKind::assert_failure);
        CHECK(rep.bugs.findings[0].function == "castVote");
        check_report_invariants(b, rep);
    }

    TEST_CASE("L3 with the scripted model installs the ordering target")
    {
        const auto b = fixture("l3_dyad");
        auto stub = StubClient::from_file(std::filesystem::path{SCTEST_FIXTURES} / "l3_dyad" / "model_stub.json");
        const auto rep = run(b, quick(), &stub);
        REQUIRE_FALSE(rep.decisions.empty());
        const auto& d = rep.decisions[0];
        CHECK(d.forecast.source == "model");
        CHECK(d.route == Route::generator);
        REQUIRE(d.installed_target);
        CHECK(d.installed_target->find("call mintDyad(1, 100)") < d.installed_target->find("call redeemable(1, 100)"));
        REQUIRE(d.suppression_runs.size() == 1);
        const auto& s = rep.suppression[d.suppression_runs[0]];
        CHECK(std::count_if(s.history.begin(), s.history.end(), [](const auto& h) { return !h.errors.empty(); }) == 1);
        CHECK(s.history[0].errors[0].code == fuzzing::CompileCode::E001);

        const auto src_line = [&] {
            std::istringstream in{*b->source};
            std::string line;
            for (int n = 1; std::getline(in, line); ++n)
                if (line.find("poolBal += value") != std::string::npos)
                    return n;
            return 0;
        }();
        REQUIRE(rep.bugs.findings.size() == 1);
        CHECK(rep.bugs.findings[0].function == "deposit");
        CHECK(rep.bugs.findings[0].line == src_line);
        check_report_invariants(b, rep);
    }

    TEST_CASE("fully coverable contracts make no decisions")
    {
        const auto b = fixture("trivial");
        const auto rep = run(b, quick());
        CHECK(rep.decisions.empty());
        CHECK(rep.stop_reason == "no uncovered functions");
        CHECK(rep.execs == 10 * fuzzing::iteration_execs);
    }

    TEST_CASE("heuristic generator forecasts fall back to concolic once")
    {
        const auto b = fixture("velocore");
        const auto rep = run(b, quick());
        REQUIRE(rep.decisions.size() == 1);
        CHECK(rep.decisions[0].forecast.value == Forecast::Generator);
        CHECK(rep.decisions[0].route == Route::concolic_fallback);
        CHECK(rep.stop_reason == "plateau after a concolic route");
        check_report_invariants(b, rep);
    }

    TEST_CASE("persisted outputs are byte-identical across runs")
    {
        const auto root = std::filesystem::temp_directory_path() / "sctest_persist_test";
        std::filesystem::remove_all(root);
        for (const char* name : {"l1_castvote", "pair_guard", "l3_dyad"})
        {
            CAPTURE(name);
            const auto b = fixture(name);
            std::vector<std::string> seen;
            for (int rep_no = 0; rep_no < 2; ++rep_no)
            {
                auto stub = StubClient::from_file(std::filesystem::path{SCTEST_FIXTURES} / "l3_dyad" / "model_stub.json");
                const auto rep = run(b, quick(7), std::string{name} == "l3_dyad" ? &stub : nullptr);
                const auto dir = root / (std::string{name} + std::to_string(rep_no));
                persist(rep, *b, dir);
                std::string all;
                for (const char* f : {"report.cov", "findings.json", "decision_log.json", "suppression_log.json"})
                {
                    REQUIRE(std::filesystem::exists(dir / f));
                    all += slurp(dir / f);
                }
                seen.push_back(all);
                const auto corpus = fuzzing::read_corpus(dir / "corpus", *b);
                CHECK(corpus.entries.size() == rep.corpus.entries.size());
                const auto log = nlohmann::json::parse(slurp(dir / "decision_log.json"));
                CHECK(log["decisions"].size() == rep.decisions.size());
            }
            CHECK(seen[0] == seen[1]);
        }
        std::filesystem::remove_all(root);
    }

    TEST_CASE("configuration checks")
    {
        auto cfg = quick();
        cfg.plateau_window = 0;
        CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
        cfg = quick();
        cfg.itr = 0;
        CHECK(code_of([&] { cfg.validate(); }) == ErrorCode::InvalidConfig);
        cfg = quick();
        cfg.model = "oracle";
        CHECK(code_of([&] { run(fixture("trivial"), cfg); }) == ErrorCode::InvalidConfig);
        CHECK_NOTHROW(quick().validate());
        const PipelineConfig defaults;
        CHECK(defaults.time_budget_s == 180);
        CHECK(defaults.max_iterations == 10);
        CHECK(defaults.depth == 2);
        CHECK(defaults.memory_budget_bytes == uint64_t{10} << 30);
        CHECK(defaults.itr == 30);
        CHECK(defaults.plateau_window == 10);
    }

    TEST_CASE("ground-truth labeling compares the engines from one baseline")
    {
        const auto b = fixture("l1_castvote");
        const auto c = short_campaign(b, 3000, 42);
        const auto outcome = label_ground_truth(b, c, nullptr);
        CHECK(outcome.concolic.new_bugs == 1);
        CHECK(outcome.generator.new_bugs == 0);
        CHECK(outcome.label == 0);
        CHECK(c.bugs().findings.empty());

        const auto t = fixture("trivial");
        const auto full = short_campaign(t, 3000);
        CHECK(label_ground_truth(t, full, nullptr).label == 1);
    }
}
