// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/orchestrator/pipeline.hpp>

#include <json.hpp>

#include <fstream>

namespace sctest::orchestrator
{
namespace
{
using json = nlohmann::ordered_json;

json uncovered_json(const coverage::UncoveredFunction& u)
{
    auto blocking = json::array();
    for (const auto& b : u.blocking)
    {
        json e = {{"offset", b.branch_offset}, {"constraint", b.constraint_text}};
        if (b.line > 0)
            e["line"] = b.line;
        e["features"] = {{"has_keccak", b.features.has_keccak}, {"has_nonlinear_term", b.features.has_nonlinear_term},
            {"loop_guarded", b.features.loop_guarded}, {"storage_dependent", b.features.storage_dependent}};
        blocking.push_back(std::move(e));
    }
    return {{"function", u.sig.declaration()}, {"status", coverage::to_string(u.status)},
        {"uncovered_instructions", u.uncovered_offsets.size()}, {"blocking", std::move(blocking)}};
}

json decision_json(const Decision& d)
{
    auto uncovered = json::array();
    for (const auto& u : d.uncovered)
        uncovered.push_back(uncovered_json(u));
    json out = {{"plateau", d.plateau}, {"execs", d.execs}, {"uncovered", std::move(uncovered)},
        {"forecast", static_cast<int>(d.forecast.value)}, {"forecast_source", d.forecast.source}};
    if (!d.forecast.raw.empty())
        out["forecast_answer"] = d.forecast.raw;
    out["route"] = to_string(d.route);
    out["coverage_before"] = d.coverage_before;
    out["coverage_after"] = d.coverage_after;
    out["bugs_before"] = d.bugs_before;
    out["bugs_after"] = d.bugs_after;
    if (d.drive)
        out["concolic"] = {{"testcases", d.concolic_testcases}, {"solver_calls", d.drive->solver_calls},
            {"sat", d.drive->sat}, {"unsat", d.drive->unsat}, {"unknown", d.drive->unknown},
            {"divergences", d.drive->divergences}, {"escalations", d.drive->escalations}};
    if (!d.prompts.empty())
        out["prompts"] = d.prompts;
    if (!d.suppression_runs.empty())
        out["suppression_runs"] = d.suppression_runs;
    if (d.installed_target)
        out["installed_target"] = *d.installed_target;
    return out;
}

void write_file(const std::filesystem::path& path, const std::string& text)
{
    std::ofstream out{path, std::ios::binary | std::ios::trunc};
    out << text;
    if (!out)
        throw std::runtime_error("cannot write " + path.string());
}
}  // namespace

std::string decision_log_json(const RunReport& report)
{
    auto decisions = json::array();
    for (const auto& d : report.decisions)
        decisions.push_back(decision_json(d));
    json doc = {{"stop_reason", report.stop_reason}, {"execs", report.execs},
        {"instructions_covered", report.report.summary.instructions_covered},
        {"instructions_total", report.report.summary.instructions_total}, {"findings", report.bugs.findings.size()},
        {"decisions", std::move(decisions)}};
    return doc.dump(2) + "\n";
}

void persist(const RunReport& report, const bytecode::ContractBundle& bundle, const std::filesystem::path& out_dir)
{
    std::filesystem::create_directories(out_dir);
    write_file(out_dir / "report.cov", coverage::to_cov_file(report.report));
    write_file(out_dir / "findings.json", fuzzing::findings_to_json(report.bugs, bundle));
    write_file(out_dir / "decision_log.json", decision_log_json(report));
    write_file(out_dir / "suppression_log.json", suppression::suppression_log(report.suppression));
    std::filesystem::remove_all(out_dir / "corpus");
    fuzzing::write_corpus(report.corpus, bundle, out_dir / "corpus");
}

}  // namespace sctest::orchestrator
