// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/coverage/coverage_map.hpp>
#include <sctest/evm/world.hpp>
#include <sctest/fuzzing/target.hpp>

#include <filesystem>
#include <string>
#include <vector>

namespace sctest::fuzzing
{
/// A transaction sequence replayable from the bundle's genesis world.
struct TestCase
{
    std::string id;  ///< digest of the transactions, see assign_id
    std::vector<evm::Transaction> txs;
    /// Fuzz-call template behind each transaction: -1 for setup or foreign transactions.
    /// Not persisted.
    std::vector<int> origin;

    friend bool operator==(const TestCase& a, const TestCase& b) { return a.id == b.id && a.txs == b.txs; }
};

/// Sets tc.id from the canonical transaction text (16 hex digits).
void assign_id(TestCase& tc);

struct CorpusEntry
{
    TestCase tc;
    size_t new_instructions = 0;  ///< coverage delta at insertion time
    size_t new_paths = 0;
};

struct Corpus
{
    std::vector<CorpusEntry> entries;
};

enum class FindingKind : uint8_t
{
    assert_failure,
    property_violation,
};

const char* to_string(FindingKind k) noexcept;

struct Finding
{
    FindingKind kind = FindingKind::assert_failure;
    uint32_t pc = 0;
    std::string function;
    std::string testcase_id;
    std::string message;
    int line = 0;  ///< source line of pc, 0 without a linemap

    /// Two findings are the same bug when kind, pc and function agree.
    bool same_bug(const Finding& o) const noexcept { return kind == o.kind && pc == o.pc && function == o.function; }
    friend bool operator==(const Finding&, const Finding&) = default;
};

struct BugReport
{
    std::vector<Finding> findings;
    std::vector<TestCase> testcases;  ///< one per finding id, in finding order

    /// Adds the finding unless the same bug is known; returns true when added.
    bool add(Finding f, const TestCase& tc);
    const TestCase* testcase(std::string_view id) const noexcept;
};

/// Plain-text bug report used in prompts; "none" when empty. With a bundle, each finding
/// lists the transactions that reproduce it.
std::string render_bug_report(const BugReport& bugs, const bytecode::ContractBundle* bundle = nullptr);

std::string testcase_to_json(const TestCase& tc, const bytecode::ContractBundle& bundle);
/// Throws Error(SchemaError) for malformed input or functions missing from the ABI.
TestCase testcase_from_json(std::string_view text, const bytecode::ContractBundle& bundle);

std::string findings_to_json(const BugReport& bugs, const bytecode::ContractBundle& bundle);
BugReport findings_from_json(std::string_view text, const bytecode::ContractBundle& bundle);

/// One <id>.json per entry; existing files in `dir` are left alone.
void write_corpus(const Corpus& corpus, const bytecode::ContractBundle& bundle, const std::filesystem::path& dir);
/// Loads every *.json in the directory, sorted by file name.
Corpus read_corpus(const std::filesystem::path& dir, const bytecode::ContractBundle& bundle);

}  // namespace sctest::fuzzing
