// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/common/error.hpp>
#include <sctest/evm/calldata.hpp>

namespace sctest::evm
{
using bytecode::AbiType;
using bytecode::AbiValue;
using bytecode::FunctionSig;

namespace
{
void put_word(Bytes& out, const U256& w)
{
    const auto be = w.to_be();
    out.insert(out.end(), be.begin(), be.end());
}

size_t padded(size_t n)
{
    return (n + 31) / 32 * 32;
}

size_t tail_size(const AbiType& t, const AbiValue& v)
{
    if (t.kind == AbiType::Kind::bytes)
        return 32 + padded(v.bytes.size());
    return 32 + 32 * v.items.size();
}
}  // namespace

void check_value(const AbiType& type, const AbiValue& value)
{
    const std::string tname = type.canonical();
    switch (type.kind)
    {
    case AbiType::Kind::uint:
    case AbiType::Kind::address:
    case AbiType::Kind::boolean:
        if (!value.bytes.empty() || !value.items.empty())
            throw Error(ErrorCode::TypeMismatch, "expected " + tname + ", got a dynamic value");
        if (value.word > type.max_value())
            throw Error(ErrorCode::ValueOutOfRange, value.word.to_dec() + " does not fit " + tname);
        break;
    case AbiType::Kind::bytes:
        if (!value.word.is_zero() || !value.items.empty())
            throw Error(ErrorCode::TypeMismatch, "expected bytes");
        break;
    case AbiType::Kind::uint_array:
        if (!value.word.is_zero() || !value.bytes.empty())
            throw Error(ErrorCode::TypeMismatch, "expected " + tname);
        for (const auto& item : value.items)
            if (item > type.max_value())
                throw Error(ErrorCode::ValueOutOfRange, item.to_dec() + " does not fit " + tname);
        break;
    }
}

std::vector<ArgLayout> calldata_layout(const FunctionSig& sig, const std::vector<AbiValue>& args)
{
    std::vector<ArgLayout> out(sig.params.size());
    size_t tail = 32 * sig.params.size();
    for (size_t i = 0; i < sig.params.size(); ++i)
    {
        out[i].head = static_cast<uint32_t>(4 + 32 * i);
        if (!sig.params[i].is_dynamic())
            continue;
        out[i].length_word = static_cast<uint32_t>(4 + tail);
        out[i].payload = out[i].length_word + 32;
        out[i].count = static_cast<uint32_t>(sig.params[i].kind == AbiType::Kind::bytes
                                                 ? args[i].bytes.size()
                                                 : args[i].items.size());
        tail += tail_size(sig.params[i], args[i]);
    }
    return out;
}

Bytes encode_calldata(const FunctionSig& sig, const std::vector<AbiValue>& args)
{
    if (args.size() != sig.params.size())
        throw Error(ErrorCode::ArityMismatch, sig.name + " takes " +
                                                  std::to_string(sig.params.size()) +
                                                  " arguments, got " + std::to_string(args.size()));
    for (size_t i = 0; i < args.size(); ++i)
        check_value(sig.params[i], args[i]);

    Bytes out(sig.selector.begin(), sig.selector.end());
    Bytes tail;
    const size_t head_size = 32 * args.size();
    for (size_t i = 0; i < args.size(); ++i)
    {
        const auto& t = sig.params[i];
        const auto& v = args[i];
        if (!t.is_dynamic())
        {
            put_word(out, v.word);
            continue;
        }
        put_word(out, U256{head_size + tail.size()});
        if (t.kind == AbiType::Kind::bytes)
        {
            put_word(tail, U256{v.bytes.size()});
            tail.insert(tail.end(), v.bytes.begin(), v.bytes.end());
            tail.resize(tail.size() + padded(v.bytes.size()) - v.bytes.size(), 0);
        }
        else
        {
            put_word(tail, U256{v.items.size()});
            for (const auto& item : v.items)
                put_word(tail, item);
        }
    }
    out.insert(out.end(), tail.begin(), tail.end());
    return out;
}

std::optional<std::vector<AbiValue>> decode_calldata(const FunctionSig& sig, BytesView data)
{
    if (data.size() < 4 || !std::equal(sig.selector.begin(), sig.selector.end(), data.begin()))
        return std::nullopt;
    const BytesView args = data.subspan(4);
    auto word_at = [&](size_t off) -> std::optional<U256> {
        if (off + 32 > args.size())
            return std::nullopt;
        return U256::from_be(args.subspan(off, 32));
    };
    std::vector<AbiValue> out;
    for (size_t i = 0; i < sig.params.size(); ++i)
    {
        const auto& t = sig.params[i];
        const auto head = word_at(32 * i);
        if (!head)
            return std::nullopt;
        if (!t.is_dynamic())
        {
            if (*head > t.max_value())
                return std::nullopt;
            out.push_back(AbiValue::of_word(*head));
            continue;
        }
        if (!head->fits_u64() || head->low64() > args.size())
            return std::nullopt;
        const size_t off = head->low64();
        const auto len = word_at(off);
        if (!len || !len->fits_u64() || len->low64() > args.size())
            return std::nullopt;
        const size_t n = len->low64();
        if (t.kind == AbiType::Kind::bytes)
        {
            if (off + 32 + n > args.size())
                return std::nullopt;
            out.push_back(AbiValue::of_bytes(Bytes(args.begin() + static_cast<ptrdiff_t>(off + 32),
                args.begin() + static_cast<ptrdiff_t>(off + 32 + n))));
        }
        else
        {
            std::vector<U256> items;
            for (size_t k = 0; k < n; ++k)
            {
                const auto w = word_at(off + 32 + 32 * k);
                if (!w || *w > t.max_value())
                    return std::nullopt;
                items.push_back(*w);
            }
            out.push_back(AbiValue::of_items(std::move(items)));
        }
    }
    return out;
}

}  // namespace sctest::evm
