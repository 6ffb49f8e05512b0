// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/fuzzing/detectors.hpp>

#include <algorithm>

namespace sctest::fuzzing
{
namespace
{
int line_of(const bytecode::ContractBundle& bundle, uint32_t pc)
{
    const auto it = bundle.linemap.find(pc);
    return it == bundle.linemap.end() ? 0 : it->second;
}

Address property_caller(const bytecode::ContractBundle& bundle)
{
    return bundle.genesis.accounts.empty() ? Address{} : bundle.genesis.accounts.front().address;
}
}  // namespace

std::vector<Finding> detect_assert(const evm::ExecResult& result, const std::string& function,
    const bytecode::ContractBundle& bundle)
{
    if (result.halt != evm::Halt::INVALID)
        return {};
    Finding f;
    f.kind = FindingKind::assert_failure;
    f.pc = result.halt_pc;
    f.function = function;
    f.line = line_of(bundle, f.pc);
    f.message = "assertion failed (INVALID) in " + function;
    return {f};
}

std::vector<Finding> detect_property_violations(const evm::EvmWorld& world_after, const bytecode::ContractBundle& bundle)
{
    std::vector<Finding> out;
    for (const auto* prop : bundle.properties())
    {
        auto w = world_after;
        const auto tx = evm::make_tx(*prop, {}, property_caller(bundle), bundle.genesis.contract_address);
        evm::ExecResult r;
        try
        {
            r = evm::execute_tx_inplace(w, tx);
        }
        catch (const Error&)
        {
            continue;
        }
        std::string why;
        if (!r.succeeded())
            why = std::string{"property halted with "} + evm::to_string(r.halt);
        else if (!r.output.empty())
        {
            const auto word = U256::from_be(BytesView{r.output}.first(std::min<size_t>(32, r.output.size())));
            if (word.is_zero())
                why = "property returned false";
        }
        if (why.empty())
            continue;
        Finding f;
        f.kind = FindingKind::property_violation;
        f.pc = r.halt_pc;
        f.function = prop->name;
        f.line = line_of(bundle, f.pc);
        f.message = why;
        out.push_back(std::move(f));
    }
    return out;
}

std::vector<Finding> detect_bugs(const evm::ExecResult& result, const std::string& function,
    const evm::EvmWorld& world_after, const bytecode::ContractBundle& bundle)
{
    auto out = detect_assert(result, function, bundle);
    auto props = detect_property_violations(world_after, bundle);
    out.insert(out.end(), props.begin(), props.end());
    return out;
}

}  // namespace sctest::fuzzing
