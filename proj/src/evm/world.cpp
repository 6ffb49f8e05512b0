// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/evm/world.hpp>

namespace sctest::evm
{
std::vector<Account> EvmWorld::accounts() const
{
    std::vector<Account> out;
    out.reserve(balances.size());
    for (const auto& [a, b] : balances)
        out.push_back({a, b});
    return out;
}

U256 EvmWorld::balance(const Address& a) const
{
    const auto it = balances.find(a);
    return it == balances.end() ? U256{} : it->second;
}

U256 EvmWorld::sload(const Address& a, const U256& slot) const
{
    const auto it = storage.find(a);
    if (it == storage.end())
        return {};
    const auto s = it->second.find(slot);
    return s == it->second.end() ? U256{} : s->second;
}

void EvmWorld::sstore(const Address& a, const U256& slot, const U256& value)
{
    auto& st = storage[a];
    if (value.is_zero())
        st.erase(slot);
    else
        st[slot] = value;
}

const ContractBundle* EvmWorld::contract(const Address& a) const
{
    const auto it = deployed.find(a);
    return it == deployed.end() ? nullptr : it->second.get();
}

bool EvmWorld::same_state(const EvmWorld& other) const
{
    auto nonempty = [](const std::map<Address, Storage>& m) {
        std::map<Address, Storage> out;
        for (const auto& [a, s] : m)
            if (!s.empty())
                out.emplace(a, s);
        return out;
    };
    return balances == other.balances && block == other.block &&
           nonempty(storage) == nonempty(other.storage);
}

EvmWorld new_world(const bytecode::GenesisConfig& genesis)
{
    EvmWorld w;
    for (const auto& acc : genesis.accounts)
    {
        if (!w.balances.emplace(acc.address, acc.balance).second)
            throw Error(ErrorCode::DuplicateAddress, acc.address.to_hex() + " listed twice");
    }
    w.block.timestamp = genesis.timestamp;
    w.block.number = 1;
    return w;
}

EvmWorld deploy(EvmWorld world, std::shared_ptr<const ContractBundle> contract, const Address& at)
{
    if (world.deployed.count(at))
        throw Error(ErrorCode::AddressInUse, at.to_hex() + " already has code");
    world.deployed.emplace(at, std::move(contract));
    world.balances.emplace(at, U256{});  // keeps an existing genesis balance
    world.storage.erase(at);
    return world;
}

EvmWorld genesis_world(std::shared_ptr<const ContractBundle> contract)
{
    const auto at = contract->genesis.contract_address;
    const auto initial = contract->genesis.storage;
    auto w = new_world(contract->genesis);
    w = deploy(std::move(w), std::move(contract), at);
    for (const auto& [slot, value] : initial)
        w.sstore(at, slot, value);
    return w;
}

std::string canonical(const Transaction& tx)
{
    std::string s;
    s += tx.function_call;
    s += '|';
    s += to_hex(tx.call_data);
    s += '|' + std::to_string(tx.delay);
    s += '|' + std::to_string(tx.gas);
    s += '|' + tx.gas_price.to_hex();
    s += '|' + tx.source.to_hex();
    s += '|' + tx.destination.to_hex();
    s += '|' + tx.value.to_hex();
    return s;
}

}  // namespace sctest::evm
