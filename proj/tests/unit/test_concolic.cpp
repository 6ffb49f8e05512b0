// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include "helpers.hpp"

#include <sctest/bytecode/cfg.hpp>
#include <sctest/bytecode/keccak.hpp>
#include <sctest/concolic/concretize.hpp>
#include <sctest/concolic/driver.hpp>
#include <sctest/concolic/smt.hpp>
#include <sctest/concolic/solver.hpp>
#include <sctest/evm/world.hpp>
#include <sctest/fuzzing/campaign.hpp>
#include <sctest/fuzzing/target.hpp>

#include <boost/multiprecision/cpp_int.hpp>

#include <fstream>
#include <random>
#include <set>

using namespace testing;
using namespace sctest::concolic;
using boost::multiprecision::cpp_int;

namespace
{
const VarId vx{0, 0, VarKind::word};
const VarId vy{1, 0, VarKind::word};
const VarId vz{2, 0, VarKind::word};

SymRef x8()
{
    return input(vx, 8);
}

SymRef k(uint64_t v)
{
    return constant(U256{v});
}

SymRef b(SymOp op, SymRef a, SymRef c)
{
    return binop(op, std::move(a), std::move(c));
}

const cpp_int modulus = cpp_int{1} << 256;

cpp_int big(const U256& v)
{
    return cpp_int{v.to_hex()};
}

U256 small(const cpp_int& v)
{
    std::ostringstream s;
    s << "0x" << std::hex << v;
    return *U256::parse(s.str());
}

// Expression trees over one uint8 unknown, evaluated independently in arbitrary precision.
struct Node
{
    SymOp op = SymOp::ADD;
    int leaf = 0;  // 0 inner, 1 x, 2 constant
    cpp_int value;
    std::vector<Node> kids;
};

cpp_int oracle(const Node& n, const cpp_int& x)
{
    if (n.leaf == 1)
        return x;
    if (n.leaf == 2)
        return n.value;
    const cpp_int a = oracle(n.kids[0], x);
    if (n.kids.size() == 1)
    {
        switch (n.op)
        {
        case SymOp::NOT:
            return modulus - 1 - a;
        case SymOp::NEG:
            return (modulus - a) % modulus;
        default:
            return a == 0 ? 1 : 0;
        }
    }
    const cpp_int c = oracle(n.kids[1], x);
    switch (n.op)
    {
    case SymOp::ADD:
        return (a + c) % modulus;
    case SymOp::SUB:
        return (a - c + modulus) % modulus;
    case SymOp::MUL:
        return (a * c) % modulus;
    case SymOp::DIV:
        return c == 0 ? cpp_int{0} : cpp_int{a / c};
    case SymOp::MOD:
        return c == 0 ? cpp_int{0} : cpp_int{a % c};
    case SymOp::EXP:
        return boost::multiprecision::powm(a, c, modulus);
    case SymOp::LT:
        return a < c ? 1 : 0;
    case SymOp::GT:
        return a > c ? 1 : 0;
    case SymOp::EQ:
        return a == c ? 1 : 0;
    case SymOp::AND:
        return a & c;
    case SymOp::OR:
        return a | c;
    case SymOp::XOR:
        return a ^ c;
    case SymOp::SHL:  // a is the shift
        return a >= 256 ? cpp_int{0} : cpp_int{(c << static_cast<unsigned>(a)) % modulus};
    case SymOp::SHR:
        return a >= 256 ? cpp_int{0} : cpp_int{c >> static_cast<unsigned>(a)};
    default:
        return 0;
    }
}

SymRef build(const Node& n)
{
    if (n.leaf == 1)
        return x8();
    if (n.leaf == 2)
        return constant(small(n.value));
    if (n.kids.size() == 1)
        return unop(n.op, build(n.kids[0]));
    return binop(n.op, build(n.kids[0]), build(n.kids[1]));
}

Node random_const(std::mt19937_64& rng)
{
    Node n;
    n.leaf = 2;
    switch (rng() % 4)
    {
    case 0:
        n.value = cpp_int{rng()} << 192 | cpp_int{rng()} << 128 | cpp_int{rng()} << 64 | rng();
        break;
    case 1:
        n.value = 200 + rng() % 120;
        break;
    default:
        n.value = rng() % 20;
    }
    return n;
}

Node random_term(std::mt19937_64& rng, int depth)
{
    if (depth == 0 || rng() % 3 == 0)
    {
        if (rng() % 3 == 0)
            return random_const(rng);
        Node n;
        n.leaf = 1;
        return n;
    }
    static const SymOp binops[] = {SymOp::ADD, SymOp::SUB, SymOp::MUL, SymOp::DIV, SymOp::MOD, SymOp::AND,
        SymOp::OR, SymOp::XOR, SymOp::SHL, SymOp::SHR, SymOp::EXP};
    static const SymOp unops[] = {SymOp::NOT, SymOp::NEG};
    Node n;
    if (rng() % 5 == 0)
    {
        n.op = unops[rng() % 2];
        n.kids.push_back(random_term(rng, depth - 1));
        return n;
    }
    n.op = binops[rng() % std::size(binops)];
    if (n.op == SymOp::EXP)
    {
        n.kids.push_back(random_term(rng, depth - 1));
        Node e;
        e.leaf = 2;
        e.value = rng() % 4;
        n.kids.push_back(e);
    }
    else if (n.op == SymOp::SHL || n.op == SymOp::SHR)
    {
        Node s;
        s.leaf = 2;
        s.value = rng() % 300;
        n.kids.push_back(s);
        n.kids.push_back(random_term(rng, depth - 1));
    }
    else
    {
        n.kids.push_back(random_term(rng, depth - 1));
        n.kids.push_back(random_term(rng, depth - 1));
    }
    return n;
}

Node random_predicate(std::mt19937_64& rng)
{
    static const SymOp cmps[] = {SymOp::EQ, SymOp::LT, SymOp::GT};
    Node n;
    switch (rng() % 5)
    {
    case 0:
        n.op = SymOp::ISZERO;
        n.kids.push_back(random_term(rng, 3));
        return n;
    case 1:
        return random_term(rng, 3);
    default:
        n.op = cmps[rng() % 3];
        n.kids.push_back(random_term(rng, 3));
        n.kids.push_back(rng() % 2 ? random_const(rng) : random_term(rng, 2));
        return n;
    }
}

AbiValue random_arg(const bytecode::AbiType& t, std::mt19937_64& rng)
{
    const auto rand_word = [&] {
        const U256 w{rng(), rng(), rng(), rng()};
        return rng() % 3 == 0 ? U256{rng() % 16} : w;
    };
    switch (t.kind)
    {
    case bytecode::AbiType::Kind::bytes:
    {
        Bytes data(rng() % 40);
        for (auto& byte : data)
            byte = static_cast<uint8_t>(rng());
        return AbiValue::of_bytes(std::move(data));
    }
    case bytecode::AbiType::Kind::uint_array:
    {
        std::vector<U256> v(rng() % 5);
        for (auto& e : v)
            e = rand_word() & t.max_value();
        return AbiValue::of_items(std::move(v));
    }
    default:
        return AbiValue::of_word(rand_word() & t.max_value());
    }
}

std::vector<uint32_t> uncovered_body_blocks(const bytecode::ContractBundle& bundle, const coverage::CoverageMap& map,
    const std::string& fn)
{
    std::vector<uint32_t> out;
    for (const auto id : bytecode::body_blocks(*bundle.cfg, *bundle.function(fn)))
        if (!map.covered(bundle.genesis.contract_address, bundle.cfg->blocks[id].start_offset))
            out.push_back(id);
    return out;
}

fuzzing::Corpus seed_corpus(std::vector<evm::Transaction> txs)
{
    fuzzing::Corpus c;
    fuzzing::TestCase tc;
    tc.txs = std::move(txs);
    fuzzing::assign_id(tc);
    c.entries.push_back({tc, 0, 0});
    return c;
}

std::vector<std::string> ids(const DriveResult& r)
{
    std::vector<std::string> out;
    for (const auto& tc : r.testcases)
        out.push_back(tc.id);
    return out;
}
}  // namespace

TEST_SUITE("concolic")
{
    TEST_CASE("solver answers the basic examples")
    {
        const auto x = input(vx, 256);
        auto r = solve({b(SymOp::EQ, b(SymOp::ADD, x, k(1)), k(5))});
        REQUIRE(r.sat());
        CHECK(r.model.at(vx) == U256{4});

        const auto y = input(vy, 8);
        r = solve({b(SymOp::EQ, b(SymOp::MUL, y, y), k(4))});
        REQUIRE(r.sat());
        CHECK(r.model.at(vy) == U256{2});

        r = solve({b(SymOp::GT, x, k(10)), b(SymOp::LT, x, k(5))});
        CHECK(r.status == SolverResult::Status::Unsat);
    }

    TEST_CASE("solver handles linear forms exactly modulo 2^256")
    {
        const auto x = input(vx, 256);
        // 6x == 4 has two solutions 2^255 apart; the smaller one is returned
        auto r = solve({b(SymOp::EQ, b(SymOp::MUL, x, k(6)), k(4))});
        REQUIRE(r.sat());
        CHECK(big(r.model.at(vx)) * 6 % modulus == 4);
        CHECK(big(r.model.at(vx)) < (modulus >> 1));

        // 4x is a multiple of 4, so it never equals 6
        r = solve({b(SymOp::EQ, b(SymOp::MUL, x, k(4)), k(6))});
        CHECK(r.status == SolverResult::Status::Unsat);

        // x - 3 < 2 wraps: x in {3, 4}
        r = solve({b(SymOp::LT, b(SymOp::SUB, x, k(3)), k(2)), b(SymOp::GT, x, k(3))});
        REQUIRE(r.sat());
        CHECK(r.model.at(vx) == U256{4});

        // ~x > 2^256 - 3 means x < 2
        r = solve({b(SymOp::GT, unop(SymOp::NOT, x), constant(U256::max() - U256{2})), b(SymOp::GT, x, k(0))});
        REQUIRE(r.sat());
        CHECK(r.model.at(vx) == U256{1});

        // declared width bounds the domain
        r = solve({b(SymOp::GT, x8(), k(255))});
        CHECK(r.status == SolverResult::Status::Unsat);
    }

    TEST_CASE("wide nonlinear constraints are Unknown, not guessed")
    {
        const auto x = input(vx, 256);
        const auto r = solve({b(SymOp::EQ, b(SymOp::MUL, x, x), k(12345678901))});
        CHECK(r.status == SolverResult::Status::Unknown);
        CHECK_FALSE(r.reason.empty());
    }

    TEST_CASE("several unknowns are solved by pinning all but one")
    {
        const auto x = input(vx, 256);
        const auto y = input(vy, 256);
        const auto p = b(SymOp::EQ, b(SymOp::ADD, x, y), k(7));
        CHECK(solve({p}).status == SolverResult::Status::Unknown);
        Assignment env;
        env.values[vx] = U256{2};
        env.values[vy] = U256{3};
        const auto r = solve({p}, {&env});
        REQUIRE(r.sat());
        Assignment check = env;
        for (const auto& [v, value] : r.model)
            check.values[v] = value;
        CHECK(eval(p, check) == U256{1});
    }

    TEST_CASE("small joint domains are searched without pinning")
    {
        const auto x = input(vx, 8);
        const auto y = input(vy, 8);
        const auto h = b(SymOp::ADD, b(SymOp::ADD, b(SymOp::MUL, b(SymOp::MUL, x, x), x), b(SymOp::MUL, x, x)), k(2));
        const auto r = solve({b(SymOp::EQ, h, b(SymOp::MUL, y, y))});
        REQUIRE(r.sat());
        CHECK(r.model.at(vx) == U256{1});
        CHECK(r.model.at(vy) == U256{2});
        const auto none = solve({b(SymOp::EQ, b(SymOp::ADD, x, y), k(600))});
        CHECK(none.status == SolverResult::Status::Unsat);
    }

    TEST_CASE("solver agrees with exhaustive search on 500 random uint8 constraints")
    {
        std::mt19937_64 rng{20260501};
        int sat = 0;
        for (int i = 0; i < 500; ++i)
        {
            const Node pred = random_predicate(rng);
            std::optional<unsigned> witness;
            for (unsigned v = 0; v < 256 && !witness; ++v)
                if (oracle(pred, v) != 0)
                    witness = v;
            const auto p = build(pred);
            CAPTURE(render(p));
            const auto r = solve({p});
            REQUIRE(r.status != SolverResult::Status::Unknown);
            CHECK(r.sat() == witness.has_value());
            if (r.sat())
            {
                ++sat;
                const auto it = r.model.find(vx);
                const cpp_int v = it == r.model.end() ? cpp_int{0} : big(it->second);
                CHECK(v < 256);
                CHECK(oracle(pred, v) != 0);
            }
        }
        CHECK(sat > 50);
        CHECK(sat < 490);
    }

    TEST_CASE("nonlinear concretization keeps one unknown")
    {
        const auto x = input(vx, 8);
        const auto y = input(vy, 8);
        const auto h = b(SymOp::ADD, b(SymOp::ADD, b(SymOp::MUL, b(SymOp::MUL, x, x), x), b(SymOp::MUL, x, x)), k(2));
        const auto p = b(SymOp::EQ, h, b(SymOp::MUL, y, y));
        Assignment env;
        env.values[vx] = U256{1};
        env.values[vy] = U256{3};
        const auto c = concretize_nonlinear(p, env);
        CHECK(inputs_of(c) == std::set<VarId>{vy});
        for (unsigned v = 0; v < 256; ++v)
        {
            Assignment a;
            a.values[vy] = U256{v};
            CHECK(eval(c, a) == U256{v * v == 4 ? 1u : 0u});
        }
        const auto r = solve({c});
        REQUIRE(r.sat());
        CHECK(r.model.at(vy) == U256{2});

        const auto lin = b(SymOp::EQ, b(SymOp::ADD, input(vx, 256), input(vy, 256)), k(7));
        CHECK(concretize_nonlinear(lin, env) == lin);

        const auto xy = b(SymOp::EQ, b(SymOp::MUL, input(vx, 256), input(vy, 256)), k(12));
        Assignment env2;
        env2.values[vy] = U256{3};
        const auto c2 = concretize_nonlinear(xy, env2, vx);
        CHECK(inputs_of(c2) == std::set<VarId>{vx});
        const auto r2 = solve({c2});
        REQUIRE(r2.sat());
        CHECK(r2.model.at(vx) == U256{4});

        CHECK(code_of([&] { concretize_nonlinear(k(1), env); }) == ErrorCode::NoSymbolicInput);
    }

    TEST_CASE("keccak concretization")
    {
        const auto x = input(vx, 256);
        const auto sym = keccak({x}, 32);
        const auto fixed = keccak({k(0xdeadbeef)}, 32);
        const Assignment none;
        auto rewritten = concretize_keccak(b(SymOp::EQ, sym, fixed), none);
        auto r = solve({rewritten});
        REQUIRE(r.sat());
        CHECK(r.model.at(vx) == U256{0xdeadbeef});

        // a hash of constant bytes becomes its digest, so an equality with a constant is decided at once
        std::array<uint8_t, 32> abc{};
        abc[0] = 'a';
        abc[1] = 'b';
        abc[2] = 'c';
        const auto digest_abc = *U256::parse("0x4e03657aea45a94fc7d47ba826c8d667c0d1e6e33a64a036ec44f58fa12d6c45");
        const auto h = keccak({constant(U256::from_be(abc))}, 3);
        const auto decided = concretize_keccak(b(SymOp::EQ, h, constant(digest_abc)), none);
        REQUIRE(is_const(decided));
        CHECK(decided->value == U256{1});
        CHECK(concretize_keccak(h, none)->value == digest_abc);

        // a digest seen at run time makes the hash invertible through the preimage table
        PreimageTable table;
        const auto pre = U256{7}.to_be();
        const auto digest = bytecode::keccak256_word(BytesView{pre.data(), pre.size()});
        table.add(digest, Bytes(pre.begin(), pre.end()));
        CHECK(concretize_keccak(b(SymOp::EQ, sym, constant(digest)), none) != nullptr);
        rewritten = concretize_keccak(b(SymOp::EQ, sym, constant(digest)), none, &table);
        r = solve({rewritten});
        REQUIRE(r.sat());
        CHECK(r.model.at(vx) == U256{7});

        // a hash over inputs with known values becomes its digest
        Assignment env;
        env.values[vx] = U256{7};
        const auto c = concretize_keccak(b(SymOp::EQ, b(SymOp::ADD, sym, input(vy, 256)), k(0)), env);
        CHECK(inputs_of(c) == std::set<VarId>{vy});
    }

    TEST_CASE("loop concretization schedule")
    {
        const auto l2 = fixture("l2_validate");
        const auto& fn = *l2->function("validate");
        const std::vector<AbiValue> args{word(0xa1), items({})};
        CHECK(concretize_loop(fn, args, 0)->at(1).items.size() == 1);
        CHECK(concretize_loop(fn, args, 1)->at(1).items.size() == 2);
        CHECK(concretize_loop(fn, args, 3)->at(1).items.size() == 8);
        CHECK_FALSE(concretize_loop(fn, args, 4));
        const std::vector<AbiValue> three{word(0xa1), items({U256{1}, U256{2}, U256{3}})};
        CHECK(concretize_loop(fn, three, 0)->at(1).items == three[1].items);
        CHECK(concretize_loop(fn, three, 1)->at(1).items == three[1].items);
        CHECK(concretize_loop(fn, three, 2)->at(1).items.size() == 4);

        const auto nested = fixture("nested3");
        const auto& g = *nested->function("g");
        CHECK_FALSE(concretize_loop(g, {word(1), word(2), word(3)}, 0));
    }

    TEST_CASE("symbolic execution records the branch predicates")
    {
        const auto fig6 = fixture("fig6_example");
        const auto w = evm::genesis_world(fig6);
        auto t = sym_execute(w, {}, call(*fig6, "Example", {word(1), word(3), word(10)}));
        REQUIRE(t.constraints.size() == 1);
        CHECK_FALSE(t.constraints[0].taken);
        CHECK(eval(t.constraints[0].held(), t.env) == U256{1});
        CHECK(inputs_of(t.constraints[0].predicate) == std::set<VarId>{vx, vy});

        const auto trivial = fixture("trivial");
        t = sym_execute(evm::genesis_world(trivial), {}, call(*trivial, "set", {word(9)}));
        CHECK(t.constraints.empty());

        const auto l2 = fixture("l2_validate");
        t = sym_execute(evm::genesis_world(l2), {}, call(*l2, "validate", {word(0xa1), items({U256{0}})}));
        // loop guard, 0 < c, c < 16, then the guard again on exit
        REQUIRE(t.constraints.size() == 4);
        const VarId len{1, 0, VarKind::length};
        const VarId key0{1, 0, VarKind::element};
        CHECK(inputs_of(t.constraints[0].predicate) == std::set<VarId>{len});
        CHECK(inputs_of(t.constraints[1].predicate) == std::set<VarId>{key0});
        CHECK(inputs_of(t.constraints[2].predicate) == std::set<VarId>{key0});
        CHECK(inputs_of(t.constraints[3].predicate) == std::set<VarId>{len});
        CHECK(var_name(*l2->function("validate"), key0) == "key[0]");
    }

    TEST_CASE("recorded predicates agree with the concrete run on random inputs")
    {
        std::mt19937_64 rng{77};
        size_t checked = 0;
        for (const char* name : {"fig6_example", "gt10", "l1_castvote", "l2_validate", "l3_dyad", "l5_checkbalance",
                 "nested3", "pair_guard", "trivial", "velocore", "disp3"})
        {
            const auto bundle = fixture(name);
            const auto w = evm::genesis_world(bundle);
            for (int i = 0; i < 40; ++i)
            {
                for (const auto& fn : bundle->functions)
                {
                    std::vector<AbiValue> args;
                    for (const auto& t : fn.params)
                        args.push_back(random_arg(t, rng));
                    const auto tx = call(*bundle, fn.name, args, rng() % 2 ? alice : bob);
                    const auto t = sym_execute(w, {}, tx);
                    for (const auto& c : t.constraints)
                    {
                        CAPTURE(name);
                        CAPTURE(render(c.predicate));
                        CHECK((eval(c.predicate, t.env) != U256{}) == c.taken);
                        ++checked;
                    }
                }
            }
        }
        CHECK(checked > 500);
    }

    TEST_CASE("drive covers every branch of the nested polynomial example")
    {
        const auto bundle = fixture("fig6_example");
        const auto w = evm::genesis_world(bundle);
        const auto r = drive(*bundle, w, seed_corpus({call(*bundle, "Example", {word(1), word(3), word(10)})}), {});
        CHECK(uncovered_body_blocks(*bundle, r.coverage, "Example").empty());
        CHECK(r.testcases.size() == 3);
        CHECK(r.testcases[0].txs[0].args[1].word == U256{3});
        const auto rep = fuzzing::replay(*bundle, w, r.testcases);
        CHECK(rep.coverage == r.coverage);
    }

    TEST_CASE("drive walks three nested guards with four test cases")
    {
        const auto bundle = fixture("nested3");
        const auto w = evm::genesis_world(bundle);
        const auto r = drive(*bundle, w, {}, {});
        CHECK(r.testcases.size() <= 4);
        CHECK(uncovered_body_blocks(*bundle, r.coverage, "g").empty());
        const auto& last = r.testcases.back().txs[0].args;
        CHECK(last[0].word == U256{5});
        CHECK(last[1].word == U256{9});
        CHECK(last[2].word == U256{7});
    }

    TEST_CASE("branchless functions return the seed")
    {
        const auto bundle = fixture("trivial");
        const auto seeds = seed_corpus({call(*bundle, "set", {word(42)})});
        const auto r = drive(*bundle, evm::genesis_world(bundle), seeds, {});
        REQUIRE(r.testcases.size() == 1);
        CHECK(r.testcases[0] == seeds.entries[0].tc);
        CHECK(r.stats.solver_calls == 0);
    }

    TEST_CASE("drive solves the cubic loop body")
    {
        // independent oracle: 0 < x^3 - 12 < 16 under 256-bit wraparound, x in [0, 255]
        std::vector<unsigned> solutions;
        for (unsigned x = 0; x < 256; ++x)
        {
            const cpp_int c = (cpp_int{x} * x * x - 12 + modulus) % modulus;
            if (c > 0 && c < 16)
                solutions.push_back(x);
        }
        REQUIRE(solutions == std::vector<unsigned>{3});

        const auto bundle = fixture("l2_validate");
        const auto w = evm::genesis_world(bundle);
        const auto r = drive(*bundle, w, {}, {});
        bool found = false;
        for (const auto& tc : r.testcases)
            if (tc.txs.back().args[1].items == std::vector<U256>{U256{solutions[0]}})
                found = true;
        CHECK(found);
        const auto rep = fuzzing::replay(*bundle, w, r.testcases);
        CHECK(rep.bugs.findings.size() == 1);
    }

    TEST_CASE("drive lengthens a dynamic array when the guard needs two elements")
    {
        const auto bundle = fixture("pair_guard");
        const auto w = evm::genesis_world(bundle);
        const auto r = drive(*bundle, w, {}, {});
        CHECK(r.stats.escalations >= 1);
        bool found = false;
        for (const auto& tc : r.testcases)
        {
            const auto& a = tc.txs.back().args[0].items;
            if (a.size() == 2 && a[0] + a[1] == U256{9})
                found = true;
        }
        CHECK(found);
        CHECK(fuzzing::replay(*bundle, w, r.testcases).bugs.findings.size() == 1);
    }

    TEST_CASE("snapshot cache does not change the output")
    {
        for (const char* name : {"fig6_example", "l2_validate", "pair_guard", "l1_castvote"})
        {
            const auto bundle = fixture(name);
            const auto w = evm::genesis_world(bundle);
            DriveOptions off;
            off.snapshot_cache = false;
            const auto a = drive(*bundle, w, {}, {}, {}, {});
            const auto c = drive(*bundle, w, {}, {}, {}, off);
            CAPTURE(name);
            CHECK(ids(a) == ids(c));
            CHECK(a.coverage == c.coverage);
        }
    }

    TEST_CASE("drive improves on a plateaued fuzz map")
    {
        const uint64_t budget = 100;
        for (const std::string name : {"l1_castvote", "l2_validate", "fig6_example"})
        {
            const auto bundle = fixture(name);
            const auto w = evm::genesis_world(bundle);
            const auto fuzz = fuzzing::run_campaign(bundle, w, fuzzing::seed_initial_target(bundle->functions),
                {budget, 0}, 42);
            const auto r = drive(*bundle, w, fuzz.corpus, fuzz.coverage);
            CAPTURE(name);
            CHECK(r.coverage.covered_count() > fuzz.coverage.covered_count());
            if (name != "fig6_example")
                CHECK(fuzzing::replay(*bundle, w, r.testcases).bugs.findings.size() == 1);
        }
    }

    TEST_CASE("SMT-LIB export")
    {
        const auto x = input(vx, 8);
        const auto text = to_smtlib({b(SymOp::EQ, b(SymOp::ADD, x, k(1)), k(5)), keccak({input(vy, 256)}, 32)});
        CHECK(text.find("(set-logic QF_BV)") != std::string::npos);
        CHECK(text.find("(declare-const in0 (_ BitVec 256))") != std::string::npos);
        CHECK(text.find("(bvule in0 #x00000000000000000000000000000000000000000000000000000000000000ff)") !=
              std::string::npos);
        CHECK(text.find("(declare-const h0 (_ BitVec 256))") != std::string::npos);
        CHECK(text.find("bvadd") != std::string::npos);
        CHECK(text.find("(check-sat)") != std::string::npos);

        const auto dir = std::filesystem::temp_directory_path() / "sctest_smt_test";
        std::filesystem::remove_all(dir);
        const auto path = emit_smtlib(dir, {b(SymOp::EQ, b(SymOp::MUL, input(vx, 256), input(vx, 256)), k(99))});
        CHECK(path.extension() == ".smt2");
        CHECK(path.stem().string().size() == 16);
        std::ifstream in{path};
        const std::string body{std::istreambuf_iterator<char>{in}, {}};
        CHECK(body.find("bvmul") != std::string::npos);
        std::filesystem::remove_all(dir);
    }

    TEST_CASE("drive writes Unknown conjunctions when asked")
    {
        const auto bundle = fixture("velocore");
        const auto w = evm::genesis_world(bundle);
        const auto dir = std::filesystem::temp_directory_path() / "sctest_smt_drive";
        std::filesystem::remove_all(dir);
        DriveOptions opt;
        opt.emit_smt = dir;
        const auto r = drive(*bundle, w, {}, {}, {}, opt);
        size_t files = 0;
        if (std::filesystem::exists(dir))
            for ([[maybe_unused]] const auto& e : std::filesystem::directory_iterator{dir})
                ++files;
        CHECK(files <= r.stats.smt_files);
        CHECK(r.stats.smt_files == r.stats.unknown);
        std::filesystem::remove_all(dir);
    }
}
