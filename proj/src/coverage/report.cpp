// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/coverage/report.hpp>

#include <sstream>

namespace sctest::coverage
{
std::map<int, bool> statement_hits(const ContractBundle& contract, const CoverageMap& map)
{
    std::map<int, bool> hits;
    if (!contract.source || contract.linemap.empty())
        return hits;
    const auto& at = contract.genesis.contract_address;
    for (const auto& [off, line] : contract.linemap)
    {
        if (contract.program->index_at(off) < 0)
            continue;
        hits[line] = hits[line] || map.covered(at, off);
    }
    return hits;
}

CoverageReport render_report(const ContractBundle& contract, const CoverageMap& map)
{
    CoverageReport r;
    const auto& at = contract.genesis.contract_address;
    const auto& code = contract.program->instructions();
    r.summary.instructions_total = code.size();
    for (const auto& ins : code)
        r.summary.instructions_covered += map.covered(at, ins.offset) ? 1 : 0;
    r.summary.paths_seen = map.paths.size();

    std::ostringstream out;
    const auto hits = statement_hits(contract, map);
    if (!hits.empty())
    {
        r.from_source = true;
        std::istringstream in{*contract.source};
        std::string line;
        for (int n = 1; std::getline(in, line); ++n)
        {
            const auto it = hits.find(n);
            out << (it != hits.end() && it->second ? "* " : "  ") << line << "\n";
        }
    }
    else
    {
        for (const auto& ins : code)
            out << (map.covered(at, ins.offset) ? "* " : "  ") << bytecode::disassemble_line(ins) << "\n";
    }
    r.text = out.str();
    return r;
}

std::string to_cov_file(const CoverageReport& report)
{
    return "COVERAGE v1 " + std::to_string(report.summary.instructions_covered) + "/" +
           std::to_string(report.summary.instructions_total) + "\n" + report.text;
}

}  // namespace sctest::coverage
