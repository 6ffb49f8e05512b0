// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/coverage/coverage_map.hpp>

#include <map>
#include <string>

namespace sctest::coverage
{
struct ReportSummary
{
    size_t instructions_covered = 0;
    size_t instructions_total = 0;
    size_t paths_seen = 0;

    friend bool operator==(const ReportSummary&, const ReportSummary&) = default;
};

struct CoverageReport
{
    std::string text;  ///< one line per source (or disassembly) line; covered ones start "* "
    ReportSummary summary;
    bool from_source = false;
};

/// Source line -> covered, for lines that own at least one instruction. Empty when the
/// bundle has no source or linemap.
std::map<int, bool> statement_hits(const ContractBundle& contract, const CoverageMap& map);

CoverageReport render_report(const ContractBundle& contract, const CoverageMap& map);

/// The .cov file: "COVERAGE v1 <covered>/<total>" followed by the report text.
std::string to_cov_file(const CoverageReport& report);

}  // namespace sctest::coverage
