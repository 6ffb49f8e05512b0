// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/abi.hpp>
#include <sctest/bytecode/assembler.hpp>
#include <sctest/bytecode/bundle.hpp>
#include <sctest/bytecode/cfg.hpp>
#include <sctest/bytecode/instruction.hpp>
#include <sctest/bytecode/keccak.hpp>
#include <sctest/common/error.hpp>

#include <doctest.h>

#include <algorithm>
#include <filesystem>
#include <random>

using namespace sctest;
using namespace sctest::bytecode;

namespace
{
std::string hex_of(const Hash256& h)
{
    return to_hex(h, false);
}

bool has_edge(const Cfg& cfg, const std::string& a, const std::string& b)
{
    return std::find(cfg.call_edges.begin(), cfg.call_edges.end(), std::pair{a, b}) !=
           cfg.call_edges.end();
}
}  // namespace

// Digests below were computed with pycryptodome's keccak (digest_bits=256).
TEST_CASE("keccak256 published vectors")
{
    CHECK(hex_of(keccak256(std::string_view{""})) ==
          "c5d2460186f7233c927e7db2dcc703c0e500b653ca82273b7bfad8045d85a470");
    CHECK(hex_of(keccak256(std::string_view{"abc"})) ==
          "4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
    CHECK(hex_of(keccak256(std::string_view{
              "abcdbcdecdefdefgefghfghighijhijkijkljklmklmnlmnomnopnopq"})) ==
          "45d3b367a6904e6e8d502ee04999a7c27647f91fa845d456525fd352ae3d7371");
    // Crosses the 136-byte rate boundary.
    const std::string long_input(300, 'a');
    CHECK(keccak256(std::string_view{long_input}) == keccak256(std::string_view{long_input}));
}

TEST_CASE("function selectors")
{
    CHECK(selector_word(selector_of("transfer(address,uint256)")) == 0xa9059cbb);
    CHECK(selector_word(selector_of("deposit(address,uint256,uint256)")) == 0x0efe6a8b);
    CHECK(selector_word(selector_of("checkBalance(uint256[],uint256)")) == 0x420b42ef);
}

TEST_CASE("decode")
{
    const auto ins = decode(*from_hex("0x6001600101"));
    REQUIRE(ins.size() == 3);
    CHECK(ins[0].op == Op::PUSH1);
    CHECK(ins[0].offset == 0);
    CHECK(ins[0].push_value() == U256{1});
    CHECK(ins[1].offset == 2);
    CHECK(ins[2].op == Op::ADD);
    CHECK(ins[2].offset == 4);
    CHECK(decode(Bytes{}).empty());
    CHECK_THROWS_AS(decode(*from_hex("0x62ff")), Error);
    try
    {
        decode(*from_hex("0x62ff"));
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::TruncatedImmediate);
    }
    const auto odd = decode(*from_hex("0x0c"));
    REQUIRE(odd.size() == 1);
    CHECK(odd[0].op == Op::INVALID);
    CHECK(odd[0].immediate.empty());
}

TEST_CASE("decode is total and re-encodes byte-exactly")
{
    std::mt19937_64 rng{3};
    for (int i = 0; i < 500; ++i)
    {
        Bytes code(rng() % 200);
        for (auto& b : code)
            b = static_cast<uint8_t>(rng());
        std::vector<Instruction> ins;
        try
        {
            ins = decode(code);
        }
        catch (const Error&)
        {
            continue;  // truncated trailing PUSH
        }
        size_t total = 0;
        for (size_t k = 0; k < ins.size(); ++k)
        {
            total += ins[k].size();
            if (k > 0)
                CHECK(ins[k].offset == ins[k - 1].next_offset());
        }
        CHECK(total == code.size());
        CHECK(encode(ins) == code);
    }
}

TEST_CASE("parse_abi")
{
    const auto abi = parse_abi(R"({"functions":[{"name":"deposit","params":["address","uint256","uint256"]}]})");
    REQUIRE(abi.size() == 1);
    CHECK(selector_word(abi[0].selector) == 0x0efe6a8b);
    CHECK(abi[0].param_names == std::vector<std::string>{"p0", "p1", "p2"});
    CHECK(parse_abi(R"({"functions":[]})").empty());
    try
    {
        parse_abi(R"({"functions":[{"name":"f","params":["uint13"]}]})");
        FAIL("expected SchemaError");
    }
    catch (const Error& e)
    {
        CHECK(e.code() == ErrorCode::SchemaError);
        CHECK(std::string{e.what()}.find("$.functions[0].params[0]") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_abi(R"({"functions":[{"params":[]}]})"), Error);
    const auto props = parse_abi(R"({"functions":[{"name":"prop_ok","params":[]}]})");
    CHECK(props[0].is_property);
}

TEST_CASE("abi types render canonically")
{
    for (const char* t : {"uint8", "uint16", "uint32", "uint64", "uint128", "uint256", "address",
             "bool", "bytes", "uint8[]", "uint256[]"})
    {
        const auto parsed = AbiType::parse(t);
        REQUIRE(parsed);
        CHECK(parsed->canonical() == t);
    }
    CHECK_FALSE(AbiType::parse("uint"));
    CHECK_FALSE(AbiType::parse("uint08"));
    CHECK_FALSE(AbiType::parse("string"));
}

TEST_CASE("cfg straight line and single jumpi")
{
    std::vector<FunctionSig> none;
    {
        Program p{assemble("PUSH 2 PUSH 3 ADD STOP").code};
        const auto cfg = build_cfg(p, none);
        CHECK(cfg.blocks.size() == 1);
        CHECK(cfg.branch_edges.empty());
    }
    {
        // One JUMPI block, its fallthrough and the target.
        Program p{assemble("PUSH 1 @t JUMPI STOP t: STOP").code};
        const auto cfg = build_cfg(p, none);
        REQUIRE(cfg.blocks.size() == 3);
        CHECK(cfg.blocks[0].succs.size() == 2);
        CHECK(cfg.blocks[1].succs.empty());
        CHECK(cfg.blocks[2].succs.empty());
    }
    {
        Program p{assemble("CALLDATASIZE JUMP t: STOP").code};
        const auto cfg = build_cfg(p, none);
        CHECK(cfg.blocks[0].unresolved_jump);
        CHECK(cfg.blocks[0].succs.empty());
    }
}

TEST_CASE("cfg blocks partition the instructions")
{
    std::mt19937_64 rng{5};
    std::vector<FunctionSig> none;
    for (int i = 0; i < 200; ++i)
    {
        Bytes code(rng() % 120);
        for (auto& b : code)
        {
            // Bias toward control flow so blocks actually split.
            const uint8_t pick[] = {0x5b, 0x56, 0x57, 0x00, 0x60, 0x01, 0x80, 0xfd};
            b = rng() % 2 ? pick[rng() % 8] : static_cast<uint8_t>(rng());
        }
        std::unique_ptr<Program> p;
        try
        {
            p = std::make_unique<Program>(code);
        }
        catch (const Error&)
        {
            continue;
        }
        const auto cfg = build_cfg(*p, none);
        size_t covered = 0;
        for (size_t b = 0; b < cfg.blocks.size(); ++b)
        {
            const auto& bb = cfg.blocks[b];
            covered += bb.last - bb.first + 1;
            if (b > 0)
                CHECK(bb.first == cfg.blocks[b - 1].last + 1);
            CHECK(bb.succs.size() <= 2);
            if (is_terminal(p->instructions()[bb.last].op))
                CHECK(bb.succs.empty());
        }
        CHECK(covered == p->instructions().size());
        for (size_t k = 0; k < p->instructions().size(); ++k)
            if (p->instructions()[k].op == Op::JUMPDEST)
                CHECK(cfg.blocks[cfg.block_of_index(k)].first == k);
    }
}

TEST_CASE("cfg call edges on the three-function dispatcher fixture")
{
    const auto bundle = load_bundle(std::filesystem::path{SCTEST_FIXTURES} / "disp3");
    const auto& cfg = *bundle.cfg;
    CHECK(cfg.dispatch.size() == 3);
    CHECK(has_edge(cfg, "dispatcher", "f"));
    CHECK(has_edge(cfg, "dispatcher", "g"));
    CHECK(has_edge(cfg, "dispatcher", "h"));
    CHECK(has_edge(cfg, "g", "h"));
    CHECK_FALSE(has_edge(cfg, "f", "h"));
    CHECK(cfg.call_edges.size() == 4);
    for (const auto& fn : bundle.functions)
    {
        REQUIRE(fn.entry_offset);
        REQUIRE(fn.body_range);
        CHECK(fn.body_range->first == *fn.entry_offset);
        CHECK(fn.body_range->second <= bundle.program->code().size());
    }
}

TEST_CASE("fixture hex matches its assembly")
{
    namespace fs = std::filesystem;
    size_t checked = 0;
    for (const auto& entry : fs::directory_iterator{SCTEST_FIXTURES})
    {
        const auto asm_path = entry.path() / "contract.asm";
        if (!fs::exists(asm_path))
            continue;
        INFO(entry.path().filename().string());
        const auto assembled = assemble(read_text_file(asm_path));
        CHECK(*from_hex(read_text_file(entry.path() / "contract.hex")) == assembled.code);
        if (fs::exists(entry.path() / "linemap.json"))
            CHECK(parse_linemap(read_text_file(entry.path() / "linemap.json")) == assembled.linemap);
        ++checked;
    }
    CHECK(checked >= 8);
}

TEST_CASE("assembler")
{
    const auto a = assemble("PUSH 0 PUSH 256 SEL transfer(address,uint256) l: @l JUMP");
    CHECK(to_hex(a.code) == "0x6000610100" "63a9059cbb" "5b" "61000a" "56");
    CHECK(a.labels.at("l") == 10);
    CHECK_THROWS_AS(assemble("FOO"), Error);
    CHECK_THROWS_AS(assemble("@missing"), Error);
    CHECK_THROWS_AS(assemble("PUSH1 0x100"), Error);
}
