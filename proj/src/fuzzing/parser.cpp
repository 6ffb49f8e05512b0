// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/fuzzing/target.hpp>

#include <algorithm>
#include <cctype>
#include <set>

namespace sctest::fuzzing
{
namespace
{
/// Argument as written, before it is checked against a parameter type.
struct RawArg
{
    enum class Kind
    {
        number,
        ident,
        array,
        mutable_param,
    };
    Kind kind = Kind::number;
    std::string text;  ///< number literal or identifier
    int col = 0;
    std::vector<RawArg> items;  ///< array elements, or the seed of a mutable parameter
    std::string type_text;
    int type_col = 0;
};

struct RawCall
{
    TargetCall call;
    int fn_col = 0;
    int paren_col = 0;
    std::vector<RawArg> args;
    std::string sender;
    int sender_col = 0;
    bool in_setup = false;
    std::string value_text, delay_text;
    int value_col = 0, delay_col = 0;
};

struct SyntaxError
{
    int col;
    std::string message;
};

bool ident_start(char c)
{
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}

bool ident_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

/// Cursor over one line; columns are 1-based.
class Scanner
{
public:
    explicit Scanner(std::string_view s) : s_{s} {}

    void skip_ws()
    {
        while (i_ < s_.size() && (s_[i_] == ' ' || s_[i_] == '\t'))
            ++i_;
    }
    bool done()
    {
        skip_ws();
        return i_ >= s_.size();
    }
    int col() const { return static_cast<int>(i_) + 1; }
    char peek()
    {
        skip_ws();
        return i_ < s_.size() ? s_[i_] : '\0';
    }
    bool accept(char c)
    {
        if (peek() != c)
            return false;
        ++i_;
        return true;
    }
    void expect(char c, const char* what)
    {
        if (!accept(c))
            throw SyntaxError{col(), std::string{"expected "} + what + got()};
    }
    std::string ident(const char* what)
    {
        skip_ws();
        if (i_ >= s_.size() || !ident_start(s_[i_]))
            throw SyntaxError{col(), std::string{"expected "} + what + got()};
        const size_t b = i_;
        while (i_ < s_.size() && ident_char(s_[i_]))
            ++i_;
        return std::string{s_.substr(b, i_ - b)};
    }
    /// Decimal or 0x-prefixed hex literal, returned verbatim.
    std::string number(const char* what)
    {
        skip_ws();
        const size_t b = i_;
        if (i_ + 1 < s_.size() && s_[i_] == '0' && (s_[i_ + 1] == 'x' || s_[i_ + 1] == 'X'))
        {
            i_ += 2;
            while (i_ < s_.size() && std::isxdigit(static_cast<unsigned char>(s_[i_])))
                ++i_;
        }
        else
            while (i_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[i_])))
                ++i_;
        if (i_ == b || (i_ < s_.size() && ident_char(s_[i_])))
        {
            i_ = b;
            throw SyntaxError{col(), std::string{"expected "} + what + got()};
        }
        return std::string{s_.substr(b, i_ - b)};
    }
    /// Type spelling such as uint8 or uint256[].
    std::string type_name()
    {
        std::string t = ident("a type");
        if (accept('['))
        {
            expect(']', "']'");
            t += "[]";
        }
        return t;
    }
    std::string got()
    {
        skip_ws();
        if (i_ >= s_.size())
            return ", found end of line";
        size_t e = i_;
        while (e < s_.size() && e - i_ < 12 && s_[e] != ' ')
            ++e;
        return ", found '" + std::string{s_.substr(i_, e - i_)} + "'";
    }

private:
    std::string_view s_;
    size_t i_ = 0;
};

RawArg parse_value(Scanner& sc, bool allow_mutable)
{
    RawArg a;
    const char c = sc.peek();
    a.col = sc.col();
    if (c == '?')
    {
        if (!allow_mutable)
            throw SyntaxError{a.col, "mutable parameter not allowed here"};
        sc.accept('?');
        a.kind = RawArg::Kind::mutable_param;
        a.text = sc.ident("a parameter name after '?'");
        sc.expect(':', "':' after the parameter name");
        sc.peek();
        a.type_col = sc.col();
        a.type_text = sc.type_name();
        sc.expect('=', "'=' before the seed value");
        a.items.push_back(parse_value(sc, false));
        return a;
    }
    if (c == '[')
    {
        sc.accept('[');
        a.kind = RawArg::Kind::array;
        if (!sc.accept(']'))
        {
            do
                a.items.push_back(parse_value(sc, false));
            while (sc.accept(','));
            sc.expect(']', "',' or ']'");
        }
        return a;
    }
    if (std::isdigit(static_cast<unsigned char>(c)))
    {
        a.kind = RawArg::Kind::number;
        a.text = sc.number("a number");
        return a;
    }
    if (ident_start(c))
    {
        a.kind = RawArg::Kind::ident;
        a.text = sc.ident("a value");
        return a;
    }
    throw SyntaxError{a.col, std::string{"expected a value"} + sc.got()};
}

RawCall parse_call(std::string_view line)
{
    Scanner sc{line};
    RawCall rc;
    const auto kw = sc.ident("'call'");
    if (kw != "call")
        throw SyntaxError{1 + static_cast<int>(line.find_first_not_of(" \t")), "expected 'call', found '" + kw + "'"};
    sc.peek();
    rc.fn_col = sc.col();
    rc.call.function = sc.ident("a function name");
    sc.peek();
    rc.paren_col = sc.col();
    sc.expect('(', "'('");
    if (!sc.accept(')'))
    {
        do
            rc.args.push_back(parse_value(sc, true));
        while (sc.accept(','));
        sc.expect(')', "',' or ')'");
    }
    std::set<std::string> seen;
    while (!sc.done())
    {
        const int c = sc.col();
        const auto opt = sc.ident("'from', 'value' or 'delay'");
        if (opt != "from" && opt != "value" && opt != "delay")
            throw SyntaxError{c, "expected 'from', 'value' or 'delay', found '" + opt + "'"};
        if (!seen.insert(opt).second)
            throw SyntaxError{c, "'" + opt + "' given twice"};
        sc.peek();
        if (opt == "from")
        {
            rc.sender_col = sc.col();
            rc.sender = sc.ident("an alias after 'from'");
        }
        else if (opt == "value")
        {
            rc.value_col = sc.col();
            rc.value_text = sc.number("a number after 'value'");
        }
        else
        {
            rc.delay_col = sc.col();
            rc.delay_text = sc.number("a number after 'delay'");
        }
    }
    return rc;
}

class Checker
{
public:
    Checker(const std::vector<FunctionSig>& abi, const std::map<std::string, Address>& aliases,
        std::vector<CompileError>& errors)
      : abi_{abi}, aliases_{aliases}, errors_{errors}
    {}

    void error(CompileCode code, int line, int col, std::string msg)
    {
        errors_.push_back({code, line, col, std::move(msg)});
    }

    /// Converts a raw value for `type`; reports and returns nullopt on failure.
    std::optional<CallArg> value_for(const AbiType& type, const RawArg& a, int line)
    {
        CallArg out;
        const auto t = type.canonical();
        switch (type.kind)
        {
        case AbiType::Kind::uint:
        case AbiType::Kind::address:
        {
            if (a.kind == RawArg::Kind::ident && type.kind == AbiType::Kind::address)
            {
                const auto it = aliases_.find(a.text);
                if (it == aliases_.end())
                {
                    error(CompileCode::E004, line, a.col, "unknown alias '" + a.text + "'");
                    return std::nullopt;
                }
                out.value = AbiValue::of_word(it->second.to_word());
                out.alias = a.text;
                return out;
            }
            if (a.kind != RawArg::Kind::number)
            {
                error(CompileCode::E003, line, a.col, "expected " + t + " value");
                return std::nullopt;
            }
            const auto v = U256::parse(a.text);
            if (!v || *v > type.max_value())
            {
                error(CompileCode::E005, line, a.col, a.text + " is out of range for " + t);
                return std::nullopt;
            }
            out.value = AbiValue::of_word(*v);
            return out;
        }
        case AbiType::Kind::boolean:
            if (a.kind == RawArg::Kind::ident && (a.text == "true" || a.text == "false"))
            {
                out.value = AbiValue::of_word(U256{a.text == "true" ? 1u : 0u});
                return out;
            }
            error(CompileCode::E003, line, a.col, "expected true or false");
            return std::nullopt;
        case AbiType::Kind::bytes:
        {
            const bool hex = a.kind == RawArg::Kind::number && a.text.size() >= 2 && a.text[1] == 'x';
            const auto b = hex ? from_hex(a.text) : std::nullopt;
            if (!b || a.text.size() % 2 != 0)
            {
                error(CompileCode::E003, line, a.col, "expected a 0x byte string with an even number of digits");
                return std::nullopt;
            }
            out.value = AbiValue::of_bytes(*b);
            return out;
        }
        case AbiType::Kind::uint_array:
        {
            if (a.kind != RawArg::Kind::array)
            {
                error(CompileCode::E003, line, a.col, "expected " + t + " array");
                return std::nullopt;
            }
            const AbiType elem = AbiType::uint(type.bits);
            bool ok = true;
            for (const auto& item : a.items)
            {
                const auto v = value_for(elem, item, line);
                ok = ok && v.has_value();
                if (v)
                    out.value.items.push_back(v->value.word);
            }
            if (!ok)
                return std::nullopt;
            return out;
        }
        }
        return std::nullopt;
    }

    std::optional<TargetCall> check(RawCall& rc, int line)
    {
        auto& call = rc.call;
        call.line = line;
        bool ok = true;
        if (!rc.sender.empty())
        {
            if (!aliases_.count(rc.sender))
            {
                error(CompileCode::E004, line, rc.sender_col, "unknown alias '" + rc.sender + "'");
                ok = false;
            }
            call.sender = rc.sender;
        }
        if (!rc.value_text.empty())
        {
            const auto v = U256::parse(rc.value_text);
            if (!v)
            {
                error(CompileCode::E005, line, rc.value_col, rc.value_text + " is out of range for a call value");
                ok = false;
            }
            else
                call.value = *v;
        }
        if (!rc.delay_text.empty())
        {
            const auto v = U256::parse(rc.delay_text);
            if (!v || !v->fits_u64())
            {
                error(CompileCode::E005, line, rc.delay_col, rc.delay_text + " is out of range for a delay");
                ok = false;
            }
            else
                call.delay = v->low64();
        }

        const auto* fn = bytecode::find_function(abi_, call.function);
        if (!fn)
        {
            error(CompileCode::E001, line, rc.fn_col, "unknown function '" + call.function + "'");
            return std::nullopt;
        }
        if (rc.args.size() != fn->params.size())
        {
            error(CompileCode::E002, line, rc.paren_col,
                fn->name + " takes " + std::to_string(fn->params.size()) + " argument(s), " +
                    std::to_string(rc.args.size()) + " given");
            return std::nullopt;
        }
        for (size_t i = 0; i < rc.args.size(); ++i)
        {
            const auto& raw = rc.args[i];
            const auto& type = fn->params[i];
            if (raw.kind == RawArg::Kind::mutable_param)
            {
                if (rc.in_setup)
                {
                    error(CompileCode::E000, line, raw.col, "setup calls cannot have mutable parameters");
                    ok = false;
                    continue;
                }
                const auto declared = AbiType::parse(raw.type_text);
                if (!declared || !(*declared == type))
                {
                    error(CompileCode::E003, line, raw.type_col,
                        "parameter " + std::to_string(i + 1) + " of " + fn->name + " is " + type.canonical() +
                            ", not " + raw.type_text);
                    ok = false;
                    continue;
                }
                if (i < fn->param_names.size() && !fn->param_names[i].empty() && raw.text != fn->param_names[i])
                {
                    error(CompileCode::E003, line, raw.col + 1,
                        "parameter " + std::to_string(i + 1) + " of " + fn->name + " is named '" +
                            fn->param_names[i] + "', not '" + raw.text + "'");
                    ok = false;
                    continue;
                }
                auto v = value_for(type, raw.items.front(), line);
                if (!v)
                {
                    ok = false;
                    continue;
                }
                v->is_mutable = true;
                v->name = raw.text;
                call.args.push_back(std::move(*v));
                continue;
            }
            auto v = value_for(type, raw, line);
            if (!v)
            {
                ok = false;
                continue;
            }
            call.args.push_back(std::move(*v));
        }
        if (!ok)
            return std::nullopt;
        return call;
    }

private:
    const std::vector<FunctionSig>& abi_;
    const std::map<std::string, Address>& aliases_;
    std::vector<CompileError>& errors_;
};

std::string_view strip_comment(std::string_view line)
{
    const auto h = line.find('#');
    if (h != std::string_view::npos)
        line = line.substr(0, h);
    while (!line.empty() && (line.back() == ' ' || line.back() == '\t' || line.back() == '\r'))
        line.remove_suffix(1);
    return line;
}
}  // namespace

ParseResult parse_target(std::string_view text, const std::vector<FunctionSig>& abi)
{
    ParseResult result;
    auto& errors = result.errors;
    FuzzTarget t;
    bool have_target = false, have_order = false;
    enum class Section
    {
        none,
        setup,
        fuzz,
    } section = Section::none;
    std::vector<std::pair<int, RawCall>> calls;

    int n = 0;
    size_t pos = 0;
    while (pos <= text.size())
    {
        const size_t nl = text.find('\n', pos);
        const auto raw_line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++n;
        const auto line = strip_comment(raw_line);
        const auto first = line.find_first_not_of(" \t");
        if (first == std::string_view::npos)
            continue;
        const int col0 = static_cast<int>(first) + 1;
        try
        {
            if (first > 0)
            {
                if (section == Section::none)
                    throw SyntaxError{col0, "indented line outside a setup: or fuzz: section"};
                auto rc = parse_call(line);
                rc.in_setup = section == Section::setup;
                calls.emplace_back(n, std::move(rc));
                continue;
            }
            Scanner sc{line};
            const auto kw = sc.ident("a declaration");
            if (kw == "target")
            {
                if (have_target)
                    throw SyntaxError{col0, "duplicate 'target' declaration"};
                t.name = sc.ident("a target name");
                have_target = true;
            }
            else if (kw == "alias")
            {
                sc.peek();
                const int name_col = sc.col();
                const auto name = sc.ident("an alias name");
                sc.expect('=', "'='");
                sc.peek();
                const int addr_col = sc.col();
                const auto lit = sc.number("an address");
                const auto a = lit.size() > 2 && lit[1] == 'x' ? Address::parse(lit) : std::nullopt;
                if (!sc.done())
                    throw SyntaxError{sc.col(), "unexpected text after the alias" + sc.got()};
                if (!a)
                    errors.push_back({CompileCode::E005, n, addr_col, lit + " is not a 20-byte 0x address"});
                else if (!t.aliases.emplace(name, *a).second)
                    errors.push_back({CompileCode::E000, n, name_col, "alias '" + name + "' declared twice"});
                continue;
            }
            else if (kw == "setup" || kw == "fuzz")
            {
                sc.expect(':', "':'");
                section = kw == "setup" ? Section::setup : Section::fuzz;
            }
            else if (kw == "order")
            {
                sc.peek();
                const int c = sc.col();
                const auto mode = sc.ident("'fixed' or 'shuffle'");
                if (mode != "fixed" && mode != "shuffle")
                    throw SyntaxError{c, "expected 'fixed' or 'shuffle', found '" + mode + "'"};
                if (have_order)
                    throw SyntaxError{col0, "duplicate 'order' declaration"};
                have_order = true;
                t.order = mode == "shuffle" ? OrderMode::shuffle : OrderMode::fixed;
            }
            else if (kw == "call")
                throw SyntaxError{col0, "call lines must be indented under setup: or fuzz:"};
            else
                throw SyntaxError{col0, "unknown declaration '" + kw + "'"};
            if (!sc.done())
                throw SyntaxError{sc.col(), "unexpected text" + sc.got()};
        }
        catch (const SyntaxError& e)
        {
            errors.push_back({CompileCode::E000, n, e.col, e.message});
        }
    }
    if (!have_target)
        errors.insert(errors.begin(), CompileError{CompileCode::E000, 1, 1, "missing 'target <name>' declaration"});

    // Aliases may be declared anywhere, so calls are checked once all lines are read.
    std::vector<CompileError> call_errors;
    Checker checker{abi, t.aliases, call_errors};
    for (auto& [line, rc] : calls)
    {
        const bool setup = rc.in_setup;
        if (auto c = checker.check(rc, line))
            (setup ? t.setup : t.fuzz).push_back(std::move(*c));
    }
    if (calls.empty() && errors.empty())
        errors.push_back({CompileCode::E000, n > 0 ? n : 1, 1, "target has no calls"});
    errors.insert(errors.end(), call_errors.begin(), call_errors.end());
    std::stable_sort(errors.begin(), errors.end(),
        [](const auto& a, const auto& b) { return a.line != b.line ? a.line < b.line : a.col < b.col; });
    if (errors.empty())
        result.target = std::move(t);
    return result;
}

}  // namespace sctest::fuzzing
