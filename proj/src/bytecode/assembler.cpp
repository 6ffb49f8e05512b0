// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/abi.hpp>
#include <sctest/bytecode/assembler.hpp>
#include <sctest/bytecode/opcodes.hpp>
#include <sctest/common/error.hpp>

#include <sstream>
#include <vector>

namespace sctest::bytecode
{
namespace
{
struct Token
{
    std::string text;
    int line = 0;
};

std::vector<Token> tokenize(std::string_view text)
{
    std::vector<Token> out;
    std::istringstream in{std::string{text}};
    std::string raw;
    int line = 0;
    while (std::getline(in, raw))
    {
        ++line;
        if (auto c = raw.find_first_of(";#"); c != std::string::npos)
            raw.erase(c);
        std::istringstream words{raw};
        std::string w;
        while (words >> w)
            out.push_back({w, line});
    }
    return out;
}

[[noreturn]] void fail(int line, const std::string& what)
{
    throw Error(ErrorCode::AssemblyError, "line " + std::to_string(line) + ": " + what);
}

U256 parse_value(const Token& t)
{
    const auto v = U256::parse(t.text);
    if (!v)
        fail(t.line, "bad value '" + t.text + "'");
    return *v;
}

unsigned min_width(const U256& v)
{
    const unsigned bytes = (v.bit_length() + 7) / 8;
    return bytes == 0 ? 1 : bytes;
}
}  // namespace

Assembly assemble(std::string_view text)
{
    const auto toks = tokenize(text);

    // Two passes: the first only measures so labels resolve on the second.
    Assembly out;
    for (int pass = 0; pass < 2; ++pass)
    {
        Bytes code;
        std::map<uint32_t, int> linemap;
        int src_line = 0;
        auto mark = [&] {
            if (src_line > 0)
                linemap[static_cast<uint32_t>(code.size())] = src_line;
        };
        auto emit_push = [&](const U256& v, unsigned width) {
            mark();
            code.push_back(static_cast<uint8_t>(0x5f + width));
            const auto be = v.to_be();
            code.insert(code.end(), be.end() - width, be.end());
        };
        auto need = [&](size_t i) -> const Token& {
            if (i >= toks.size())
                fail(toks.back().line, "missing operand after '" + toks.back().text + "'");
            return toks[i];
        };

        for (size_t i = 0; i < toks.size(); ++i)
        {
            const Token& t = toks[i];
            const std::string& w = t.text;
            if (w == ".line")
            {
                const auto v = parse_value(need(++i));
                src_line = static_cast<int>(v.low64());
            }
            else if (w == ".byte")
            {
                const auto v = parse_value(need(++i));
                if (v > U256{0xff})
                    fail(t.line, ".byte operand exceeds 0xff");
                mark();
                code.push_back(static_cast<uint8_t>(v.low64()));
            }
            else if (w.size() > 1 && w.back() == ':')
            {
                const std::string name = w.substr(0, w.size() - 1);
                if (pass == 0)
                {
                    if (out.labels.count(name))
                        fail(t.line, "duplicate label '" + name + "'");
                    out.labels[name] = static_cast<uint32_t>(code.size());
                }
                mark();
                code.push_back(static_cast<uint8_t>(Op::JUMPDEST));
            }
            else if (w[0] == '@')
            {
                uint32_t addr = 0;
                if (pass == 1)
                {
                    const auto it = out.labels.find(w.substr(1));
                    if (it == out.labels.end())
                        fail(t.line, "unknown label '" + w.substr(1) + "'");
                    addr = it->second;
                }
                emit_push(addr, 2);
            }
            else if (w == "SEL")
            {
                const auto s = selector_of(need(++i).text);
                emit_push(U256{selector_word(s)}, 4);
            }
            else if (w == "PUSH")
            {
                const auto v = parse_value(need(++i));
                emit_push(v, min_width(v));
            }
            else
            {
                const auto byte = op_from_mnemonic(w);
                if (!byte)
                    fail(t.line, "unknown mnemonic '" + w + "'");
                if (is_push(*byte))
                {
                    const unsigned width = *byte - 0x5fu;
                    const auto v = parse_value(need(++i));
                    if (min_width(v) > width)
                        fail(t.line, "value does not fit " + w);
                    emit_push(v, width);
                }
                else
                {
                    mark();
                    code.push_back(*byte);
                }
            }
        }
        out.code = std::move(code);
        out.linemap = std::move(linemap);
    }
    return out;
}

}  // namespace sctest::bytecode
