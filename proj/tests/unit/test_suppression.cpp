// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include <sctest/suppression/suppress.hpp>

#include <json.hpp>

using namespace testing;
using namespace sctest::suppression;
using sctest::models::StubClient;

namespace
{
const std::string good_target = R"(target dyad_order
alias A = 0x00000000000000000000000000000000000000a1
alias B = 0x00000000000000000000000000000000000000b2
order fixed
setup:
  call mintDyad(1, 100) from A
  call redeemable(1, 100) from A
fuzz:
  call deposit(A, ?id:uint256=1, ?value:uint256=1) from B)";

std::string replace(std::string s, const std::string& from, const std::string& to)
{
    const auto at = s.find(from);
    REQUIRE(at != std::string::npos);
    return s.replace(at, from.size(), to);
}

/// Broken variants of good_target, one per validator error class.
std::vector<std::string> broken_targets()
{
    return {
        replace(good_target, "call redeemable", "call reemable"),                  // E001
        replace(good_target, "call mintDyad(1, 100)", "call mintDyad(1)"),          // E002
        replace(good_target, "?value:uint256=1", "?value:uint256=[1]"),             // E003
        replace(good_target, "from B", "from C"),                                  // E004
        replace(good_target, "call redeemable(1, 100) from A", "call redeemable(1, 100) from A delay 99999999999999999999999"),  // E005
    };
}

struct Fixture
{
    std::shared_ptr<const bytecode::ContractBundle> bundle = fixture("l3_dyad");
    fuzzing::Campaign campaign{bundle, evm::genesis_world(bundle), fuzzing::seed_initial_target(bundle->functions), 7};

    Fixture() { campaign.run(300); }
};

StubClient scripted(std::vector<std::string> responses)
{
    return StubClient{{{"*", std::move(responses)}}};
}

void check_history_shape(const SuppressionRun& run, unsigned itr)
{
    CHECK(run.validations() <= itr);
    for (size_t i = 0; i < run.history.size(); ++i)
    {
        CHECK(run.history[i].iteration == i + 1);
        CHECK(run.history[i].errors.empty() == run.history[i].coverage_delta.has_value());
    }
}
}  // namespace

TEST_SUITE("suppression")
{
    TEST_CASE("few-shot examples are real repairs")
    {
        const auto& examples = few_shot_examples();
        CHECK(examples.size() == 3);
        std::set<fuzzing::CompileCode> codes;
        for (const auto& ex : examples)
        {
            const auto broken = fuzzing::parse_target(ex.broken, ex.abi);
            CHECK_FALSE(broken.ok());
            for (const auto& e : broken.errors)
                codes.insert(e.code);
            CHECK(fuzzing::parse_target(ex.fixed, ex.abi).ok());
        }
        CHECK(codes.size() >= 4);
    }

    TEST_CASE("broken variants fail with the intended codes")
    {
        const auto b = fixture("l3_dyad");
        CHECK(fuzzing::parse_target(good_target, b->functions).ok());
        const std::vector<fuzzing::CompileCode> want = {fuzzing::CompileCode::E001, fuzzing::CompileCode::E002,
            fuzzing::CompileCode::E003, fuzzing::CompileCode::E004, fuzzing::CompileCode::E005};
        const auto variants = broken_targets();
        for (size_t i = 0; i < variants.size(); ++i)
        {
            const auto r = fuzzing::parse_target(variants[i], b->functions);
            REQUIRE_FALSE(r.ok());
            CAPTURE(fuzzing::render_errors(r.errors));
            CHECK(r.errors.front().code == want[i]);
        }
    }

    TEST_CASE("repair prompt cites the error position and name")
    {
        const auto b = fixture("l3_dyad");
        const std::string text =
            "target t\norder fixed\nfuzz:\n  call mintDyd(?id:uint256=1, ?amount:uint256=1)\n";
        const auto errors = fuzzing::parse_target(text, b->functions).errors;
        REQUIRE(errors.size() == 1);
        CHECK(errors[0].line == 4);
        const auto p = few_shot_repair_prompt(*b, text, errors);
        CHECK(p.find("line 4") != std::string::npos);
        CHECK(p.find("'mintDyd'") != std::string::npos);
        CHECK(p.find("Example 3") != std::string::npos);
        CHECK(p.find("contract Dyad") != std::string::npos);
        CHECK(p.find(text) != std::string::npos);
        CHECK(few_shot_repair_prompt(*b, text, errors) == p);
    }

    TEST_CASE("coverage-feedback prompt carries the annotated report")
    {
        const auto b = fixture("l3_dyad");
        coverage::CoverageReport report;
        report.text = "* contract Dyad {\n      poolBal += value; assert(poolBal <= minted);\n";
        const auto p = few_shot_repair_prompt(*b, good_target, report);
        CHECK(p.find(report.text) != std::string::npos);
        CHECK(p.find("covered lines start with '*'") != std::string::npos);
        CHECK(few_shot_repair_prompt(*b, good_target, report) == p);
    }

    TEST_CASE("one error round then a fix")
    {
        Fixture f;
        auto stub = scripted({good_target});
        const auto run = suppress(stub, f.campaign, f.bundle, broken_targets()[0], 30);
        CHECK(run.validations() == 2);
        CHECK(run.model_calls == 1);
        CHECK(run.improved);
        CHECK(run.stop_reason == "improved");
        REQUIRE(run.target);
        CHECK(run.target_text == good_target);
        REQUIRE(run.history.size() == 2);
        CHECK(run.history[0].errors.size() == 1);
        CHECK(run.history[0].errors[0].code == fuzzing::CompileCode::E001);
        CHECK(run.history[1].errors.empty());
        CHECK(*run.history[1].coverage_delta > 0);
        check_history_shape(run, 30);
    }

    TEST_CASE("a valid improving target is returned unchanged")
    {
        Fixture f;
        auto stub = scripted({});
        const auto run = suppress(stub, f.campaign, f.bundle, good_target, 30);
        CHECK(run.validations() == 1);
        CHECK(run.model_calls == 0);
        CHECK(run.target_text == good_target);
        CHECK(stub.calls() == 0);
    }

    TEST_CASE("a valid but unhelpful target gets coverage feedback")
    {
        Fixture f;
        const std::string idle = "target idle\norder fixed\nfuzz:\n  call mintDyad(?id:uint256=0, ?amount:uint256=0)\n";
        auto stub = scripted({good_target});
        const auto run = suppress(stub, f.campaign, f.bundle, idle, 30);
        REQUIRE(run.validations() == 2);
        CHECK(run.history[0].errors.empty());
        CHECK(run.history[0].coverage_delta == std::optional<size_t>{0});
        CHECK(run.improved);
        REQUIRE(stub.prompts().size() == 1);
        CHECK(stub.prompts()[0].find("covered lines start with '*'") != std::string::npos);
        CHECK(stub.prompts()[0].find("\n* ") != std::string::npos);
    }

    TEST_CASE("fix-in-k-steps stubs and a never-fixing stub")
    {
        Fixture f;
        const auto broken = broken_targets();
        for (unsigned itr : {1u, 5u, 30u})
        {
            for (unsigned k = 1; k <= 5; ++k)
            {
                CAPTURE(itr);
                CAPTURE(k);
                std::vector<std::string> responses;
                for (unsigned i = 1; i < k; ++i)
                    responses.push_back(broken[i % broken.size()]);
                responses.push_back(good_target);
                auto stub = scripted(responses);
                const auto run = suppress(stub, f.campaign, f.bundle, broken[0], itr);
                check_history_shape(run, itr);
                CHECK(run.validations() == std::min(k + 1, itr));
                if (k + 1 <= itr)
                {
                    CHECK(run.target.has_value());
                    CHECK(run.improved);
                    CHECK(run.target_text == good_target);
                }
                else
                {
                    CHECK_FALSE(run.target.has_value());
                    CHECK(run.stop_reason == "exhausted");
                }
            }

            std::vector<std::string> never(itr, broken[1]);
            auto stub = scripted(never);
            const auto run = suppress(stub, f.campaign, f.bundle, broken[1], itr);
            CHECK(run.validations() == itr);
            CHECK(run.model_calls == itr - 1);
            CHECK(run.target_text == broken[1]);
            CHECK_FALSE(run.target.has_value());
            for (const auto& h : run.history)
            {
                REQUIRE_FALSE(h.errors.empty());
                CHECK(h.errors.front().code == fuzzing::CompileCode::E002);
            }
        }
    }

    TEST_CASE("model failure stops the loop with the last candidate")
    {
        Fixture f;
        auto stub = scripted({broken_targets()[2]});
        const auto run = suppress(stub, f.campaign, f.bundle, broken_targets()[0], 30);
        CHECK(run.validations() == 2);
        CHECK(run.model_calls == 2);
        CHECK(run.target_text == broken_targets()[2]);
        CHECK(run.stop_reason.rfind("model failed", 0) == 0);
    }

    TEST_CASE("empty model answers count as broken candidates")
    {
        Fixture f;
        auto stub = scripted({"", "```\n" + good_target + "```\n"});
        const auto run = suppress(stub, f.campaign, f.bundle, broken_targets()[0], 30);
        CHECK(run.validations() == 3);
        CHECK(run.improved);
    }

    TEST_CASE("returned clean targets fuzz without validator errors")
    {
        Fixture f;
        auto stub = scripted({good_target});
        const auto run = suppress(stub, f.campaign, f.bundle, broken_targets()[3], 5);
        REQUIRE(run.target);
        const auto r = fuzzing::run_campaign(f.bundle, evm::genesis_world(f.bundle), *run.target, {2000, 0}, 1);
        CHECK(r.execs == 2000);
        CHECK(r.bugs.findings.size() >= 1);
    }

    TEST_CASE("suppression log is deterministic JSON")
    {
        Fixture f;
        std::vector<SuppressionRun> runs;
        for (int rep = 0; rep < 2; ++rep)
        {
            auto stub = scripted({good_target});
            runs.push_back(suppress(stub, f.campaign, f.bundle, broken_targets()[0], 30));
        }
        const auto one = suppression_log({runs[0]});
        CHECK(one == suppression_log({runs[1]}));
        const auto doc = nlohmann::json::parse(one);
        REQUIRE(doc.size() == 1);
        CHECK(doc[0]["validations"] == 2);
        CHECK(doc[0]["history"][0]["errors"][0]["code"] == "E001");
        CHECK(doc[0]["history"][0]["coverage_delta"].is_null());
        CHECK(doc[0]["history"][1]["coverage_delta"].get<size_t>() > 0);
    }

    TEST_CASE("zero iterations is a configuration error")
    {
        Fixture f;
        auto stub = scripted({});
        CHECK(code_of([&] { suppress(stub, f.campaign, f.bundle, good_target, 0); }) == ErrorCode::InvalidConfig);
    }
}
