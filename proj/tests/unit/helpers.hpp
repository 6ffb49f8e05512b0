// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <sctest/bytecode/bundle.hpp>
#include <sctest/common/error.hpp>
#include <sctest/evm/interpreter.hpp>

#include <doctest.h>

#include <filesystem>
#include <memory>

namespace testing
{
using namespace sctest;

inline std::shared_ptr<const bytecode::ContractBundle> fixture(const std::string& name)
{
    return std::make_shared<const bytecode::ContractBundle>(
        bytecode::load_bundle(std::filesystem::path{SCTEST_FIXTURES} / name));
}

inline Address addr(const char* text)
{
    return *Address::parse(text);
}

inline const Address alice = *Address::parse("0xa1");
inline const Address bob = *Address::parse("0xb2");

inline evm::Transaction call(const bytecode::ContractBundle& b, const std::string& fn,
    std::vector<bytecode::AbiValue> args, const Address& from = alice, uint64_t delay = 0)
{
    const auto* sig = b.function(fn);
    REQUIRE(sig != nullptr);
    return evm::make_tx(*sig, std::move(args), from, b.genesis.contract_address, {}, delay);
}

inline bytecode::AbiValue word(uint64_t v)
{
    return bytecode::AbiValue::of_word(U256{v});
}

inline bytecode::AbiValue items(std::vector<U256> v)
{
    return bytecode::AbiValue::of_items(std::move(v));
}

template <typename F>
ErrorCode code_of(F&& f)
{
    try
    {
        f();
    }
    catch (const Error& e)
    {
        return e.code();
    }
    FAIL("expected an sctest::Error");
    return ErrorCode::InvalidConfig;
}

}  // namespace testing
