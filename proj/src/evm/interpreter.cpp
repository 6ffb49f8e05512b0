// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/common/error.hpp>
#include <sctest/evm/calldata.hpp>
#include <sctest/evm/interpreter.hpp>

#include <algorithm>
#include <optional>

namespace sctest::evm
{
using bytecode::Instruction;
using bytecode::Op;
using bytecode::OpKind;

const char* to_string(Halt h) noexcept
{
    switch (h)
    {
    case Halt::STOP:
        return "STOP";
    case Halt::RETURN:
        return "RETURN";
    case Halt::REVERT:
        return "REVERT";
    case Halt::INVALID:
        return "INVALID";
    case Halt::OUT_OF_GAS:
        return "OUT_OF_GAS";
    }
    return "?";
}

const char* to_string(ExternalCall::Kind k) noexcept
{
    switch (k)
    {
    case ExternalCall::Kind::CREATE:
        return "CREATE";
    case ExternalCall::Kind::CREATE2:
        return "CREATE2";
    case ExternalCall::Kind::CALL:
        return "CALL";
    case ExternalCall::Kind::DELEGATECALL:
        return "DELEGATECALL";
    case ExternalCall::Kind::STATICCALL:
        return "STATICCALL";
    case ExternalCall::Kind::SELFDESTRUCT:
        return "SELFDESTRUCT";
    }
    return "?";
}

uint64_t base_gas(Op op) noexcept
{
    switch (op)
    {
    case Op::MLOAD:
    case Op::MSTORE:
    case Op::MSTORE8:
    case Op::CALLDATACOPY:
        return 20;
    case Op::SLOAD:
        return 100;
    case Op::SSTORE:
        return 200;
    case Op::SHA3:
        return 30;
    case Op::STOP:
    case Op::RETURN:
    case Op::REVERT:
    case Op::INVALID:
    case Op::JUMPDEST:
        return 1;
    default:
        break;
    }
    const auto kind = bytecode::op_info(static_cast<uint8_t>(op)).kind;
    if (kind == OpKind::call)
        return 500;
    if (kind == OpKind::log)
        return 100;
    return 3;
}

namespace
{
constexpr size_t max_memory = size_t{1} << 20;
constexpr size_t max_stack = 1024;

struct JournalEntry
{
    bool is_storage = true;
    Address address;
    U256 slot;
    U256 old;
};

struct Frame
{
    const ContractBundle* code = nullptr;
    Address self;
    Address caller;
    U256 value;
    Bytes calldata;
    bool is_static = false;
    int depth = 0;
    uint32_t start_pc = 0;
    std::vector<U256> stack;
    Bytes memory;
};

struct Outcome
{
    Halt halt = Halt::STOP;
    Bytes output;
    uint32_t pc = 0;
};

/// Where execution starts for the given calldata, or nullopt for an empty success.
std::optional<uint32_t> entry_point(const ContractBundle& code, const Bytes& calldata, bool monitor)
{
    if (calldata.size() >= 4)
    {
        bytecode::Selector sel{};
        std::copy_n(calldata.begin(), 4, sel.begin());
        if (bytecode::find_function(code.functions, sel))
            return 0;
    }
    if (!monitor)
        return 0;
    if (const auto* fb = code.function("fallback"); fb && fb->entry_offset)
        return *fb->entry_offset;
    return std::nullopt;
}

std::string function_name_for(const ContractBundle& code, const Bytes& calldata)
{
    if (calldata.size() >= 4)
    {
        bytecode::Selector sel{};
        std::copy_n(calldata.begin(), 4, sel.begin());
        if (const auto* f = bytecode::find_function(code.functions, sel))
            return f->name;
    }
    return "fallback";
}

class Machine
{
public:
    Machine(EvmWorld& world, uint64_t gas, Observer* obs, ExecResult& res)
      : world_{world}, gas_left_{gas}, obs_{obs}, res_{res}
    {}

    uint64_t gas_left() const noexcept { return gas_left_; }
    size_t mark() const noexcept { return journal_.size(); }

    void rollback(size_t mark)
    {
        while (journal_.size() > mark)
        {
            const auto& e = journal_.back();
            if (e.is_storage)
                world_.sstore(e.address, e.slot, e.old);
            else
                world_.balances[e.address] = e.old;
            journal_.pop_back();
        }
    }

    bool transfer(const Address& from, const Address& to, const U256& amount)
    {
        if (amount.is_zero() || from == to)
            return world_.balance(from) >= amount;
        const U256 fb = world_.balance(from);
        if (fb < amount)
            return false;
        const U256 tb = world_.balance(to);
        journal_.push_back({false, from, {}, fb});
        journal_.push_back({false, to, {}, tb});
        world_.balances[from] = fb - amount;
        world_.balances[to] = tb + amount;
        return true;
    }

    void store(const Address& a, const U256& slot, const U256& v)
    {
        journal_.push_back({true, a, slot, world_.sload(a, slot)});
        world_.sstore(a, slot, v);
    }

    Outcome run(Frame& f);

private:
    bool touch_memory(Frame& f, const U256& offset, const U256& size)
    {
        if (size.is_zero())
            return true;
        if (!offset.fits_u64() || !size.fits_u64() || offset.low64() > max_memory ||
            size.low64() > max_memory || offset.low64() + size.low64() > max_memory)
            return false;
        const size_t end = offset.low64() + size.low64();
        if (f.memory.size() < end)
            f.memory.resize((end + 31) / 32 * 32, 0);
        return true;
    }

    Outcome call(Frame& f, const Instruction& in);

    EvmWorld& world_;
    uint64_t gas_left_;
    Observer* obs_;
    ExecResult& res_;
    std::vector<JournalEntry> journal_;
};

Outcome Machine::run(Frame& f)
{
    const auto& prog = *f.code->program;
    const auto& code = prog.instructions();
    int idx = prog.index_at(f.start_pc);
    if (idx < 0 && f.start_pc < prog.code().size())
        return {Halt::INVALID, {}, f.start_pc};
    if (idx < 0)
        idx = static_cast<int>(code.size());

    auto& st = f.stack;
    auto pop = [&st] {
        U256 v = st.back();
        st.pop_back();
        return v;
    };
    auto view = [&](uint32_t pc) {
        return FrameView{f.depth, f.self, std::span<const U256>{st}, f.memory, f.calldata, pc};
    };

    while (true)
    {
        if (static_cast<size_t>(idx) >= code.size())
            return {Halt::STOP, {}, static_cast<uint32_t>(prog.code().size())};
        const Instruction& in = code[static_cast<size_t>(idx)];
        const auto& info = in.info();
        const uint32_t pc = in.offset;
        int next = idx + 1;

        if (!info.supported || st.size() < info.inputs ||
            st.size() - info.inputs + info.outputs > max_stack)
        {
            // Unknown byte, stack underflow or overflow: an exceptional halt costing 1.
            if (gas_left_ == 0)
                return {Halt::OUT_OF_GAS, {}, pc};
            gas_left_ -= 1;
            if (f.depth == 0)
                res_.trace.push_back(pc);
            return {Halt::INVALID, {}, pc};
        }

        // Dynamic costs and memory bounds are checked before charging.
        uint64_t cost = base_gas(in.op);
        bool mem_ok = true;
        const size_t n = st.size();
        auto arg = [&](size_t k) -> const U256& { return st[n - 1 - k]; };
        switch (in.op)
        {
        case Op::SHA3:
            mem_ok = touch_memory(f, arg(0), arg(1));
            if (mem_ok)
                cost += 6 * ((arg(1).low64() + 31) / 32);
            break;
        case Op::CALLDATACOPY:
            mem_ok = touch_memory(f, arg(0), arg(2));
            if (mem_ok)
                cost += 3 * ((arg(2).low64() + 31) / 32);
            break;
        case Op::MLOAD:
        case Op::MSTORE:
            mem_ok = touch_memory(f, arg(0), U256{32});
            break;
        case Op::MSTORE8:
            mem_ok = touch_memory(f, arg(0), U256{1});
            break;
        case Op::RETURN:
        case Op::REVERT:
        case Op::LOG0:
        case Op::LOG4:
        case Op::CREATE:
            mem_ok = touch_memory(f, arg(0 + (in.op == Op::CREATE)), arg(1 + (in.op == Op::CREATE)));
            break;
        case Op::CREATE2:
            mem_ok = touch_memory(f, arg(1), arg(2));
            break;
        case Op::CALL:
            mem_ok = touch_memory(f, arg(3), arg(4)) && touch_memory(f, arg(5), arg(6));
            break;
        case Op::DELEGATECALL:
        case Op::STATICCALL:
            mem_ok = touch_memory(f, arg(2), arg(3)) && touch_memory(f, arg(4), arg(5));
            break;
        default:
            if (in.byte > 0xa0 && in.byte < 0xa4)
                mem_ok = touch_memory(f, arg(0), arg(1));
            break;
        }
        if (!mem_ok || gas_left_ < cost)
            return {Halt::OUT_OF_GAS, {}, pc};
        gas_left_ -= cost;
        if (f.depth == 0)
            res_.trace.push_back(pc);
        if (obs_)
            obs_->before(view(pc), in);

        const uint8_t b = in.byte;
        if (bytecode::is_push(b))
        {
            st.push_back(in.push_value());
        }
        else if (b >= 0x80 && b <= 0x8f)
        {
            st.push_back(st[st.size() - 1 - (b - 0x80u)]);
        }
        else if (b >= 0x90 && b <= 0x9f)
        {
            std::swap(st[st.size() - 1], st[st.size() - 2 - (b - 0x90u)]);
        }
        else if (b >= 0xa0 && b <= 0xa4)
        {
            if (f.is_static)
                return {Halt::INVALID, {}, pc};
            const U256 off = pop(), size = pop();
            LogRecord log{f.self, {}, {}};
            for (unsigned k = 0; k < b - 0xa0u; ++k)
                log.topics.push_back(pop());
            if (!size.is_zero())
                log.data.assign(f.memory.begin() + static_cast<ptrdiff_t>(off.low64()),
                    f.memory.begin() + static_cast<ptrdiff_t>(off.low64() + size.low64()));
            res_.logs.push_back(std::move(log));
        }
        else
        {
            switch (in.op)
            {
            case Op::STOP:
                return {Halt::STOP, {}, pc};
            case Op::ADD:
            {
                const U256 a = pop();
                st.back() = a + st.back();
                break;
            }
            case Op::MUL:
            {
                const U256 a = pop();
                st.back() = a * st.back();
                break;
            }
            case Op::SUB:
            {
                const U256 a = pop();
                st.back() = a - st.back();
                break;
            }
            case Op::DIV:
            {
                const U256 a = pop();
                st.back() = a / st.back();
                break;
            }
            case Op::MOD:
            {
                const U256 a = pop();
                st.back() = a % st.back();
                break;
            }
            case Op::EXP:
            {
                const U256 a = pop();
                st.back() = exp(a, st.back());
                break;
            }
            case Op::LT:
            {
                const U256 a = pop();
                st.back() = U256{a < st.back() ? 1u : 0u};
                break;
            }
            case Op::GT:
            {
                const U256 a = pop();
                st.back() = U256{a > st.back() ? 1u : 0u};
                break;
            }
            case Op::EQ:
            {
                const U256 a = pop();
                st.back() = U256{a == st.back() ? 1u : 0u};
                break;
            }
            case Op::ISZERO:
                st.back() = U256{st.back().is_zero() ? 1u : 0u};
                break;
            case Op::AND:
            {
                const U256 a = pop();
                st.back() = a & st.back();
                break;
            }
            case Op::OR:
            {
                const U256 a = pop();
                st.back() = a | st.back();
                break;
            }
            case Op::XOR:
            {
                const U256 a = pop();
                st.back() = a ^ st.back();
                break;
            }
            case Op::NOT:
                st.back() = ~st.back();
                break;
            case Op::SHL:
            {
                const U256 shift = pop();
                st.back() = shl(st.back(), shift);
                break;
            }
            case Op::SHR:
            {
                const U256 shift = pop();
                st.back() = shr(st.back(), shift);
                break;
            }
            case Op::SHA3:
            {
                const U256 off = pop();
                const U256 size = pop();
                const BytesView data = size.is_zero()
                                           ? BytesView{}
                                           : BytesView{f.memory.data() + off.low64(), size.low64()};
                st.push_back(bytecode::keccak256_word(data));
                break;
            }
            case Op::ADDRESS:
                st.push_back(f.self.to_word());
                break;
            case Op::BALANCE:
                st.back() = world_.balance(Address::from_word(st.back()));
                break;
            case Op::CALLER:
                st.push_back(f.caller.to_word());
                break;
            case Op::CALLVALUE:
                st.push_back(f.value);
                break;
            case Op::CALLDATALOAD:
            {
                const U256 off = pop();
                std::array<uint8_t, 32> word{};
                if (off.fits_u64() && off.low64() < f.calldata.size())
                {
                    const size_t o = off.low64();
                    const size_t k = std::min<size_t>(32, f.calldata.size() - o);
                    std::copy_n(f.calldata.begin() + static_cast<ptrdiff_t>(o), k, word.begin());
                }
                st.push_back(U256::from_be(word));
                break;
            }
            case Op::CALLDATASIZE:
                st.push_back(U256{f.calldata.size()});
                break;
            case Op::CALLDATACOPY:
            {
                const U256 dst = pop(), src = pop(), size = pop();
                for (uint64_t k = 0; k < size.low64(); ++k)
                {
                    const U256 s = src + U256{k};
                    f.memory[dst.low64() + k] =
                        s.fits_u64() && s.low64() < f.calldata.size() ? f.calldata[s.low64()] : 0;
                }
                break;
            }
            case Op::TIMESTAMP:
                st.push_back(U256{world_.block.timestamp});
                break;
            case Op::NUMBER:
                st.push_back(U256{world_.block.number});
                break;
            case Op::POP:
                st.pop_back();
                break;
            case Op::MLOAD:
            {
                const size_t off = st.back().low64();
                st.back() = U256::from_be(BytesView{f.memory.data() + off, 32});
                break;
            }
            case Op::MSTORE:
            {
                const size_t off = pop().low64();
                const auto be = pop().to_be();
                std::copy(be.begin(), be.end(), f.memory.begin() + static_cast<ptrdiff_t>(off));
                break;
            }
            case Op::MSTORE8:
            {
                const size_t off = pop().low64();
                f.memory[off] = static_cast<uint8_t>(pop().low64());
                break;
            }
            case Op::SLOAD:
                st.back() = world_.sload(f.self, st.back());
                break;
            case Op::SSTORE:
            {
                if (f.is_static)
                    return {Halt::INVALID, {}, pc};
                const U256 slot = pop();
                const U256 v = pop();
                store(f.self, slot, v);
                break;
            }
            case Op::JUMP:
            {
                const U256 dest = pop();
                if (!prog.is_jumpdest(dest))
                    return {Halt::INVALID, {}, pc};
                next = prog.index_at(static_cast<uint32_t>(dest.low64()));
                break;
            }
            case Op::JUMPI:
            {
                const U256 dest = pop();
                const U256 cond = pop();
                if (!cond.is_zero())
                {
                    if (!prog.is_jumpdest(dest))
                        return {Halt::INVALID, {}, pc};
                    next = prog.index_at(static_cast<uint32_t>(dest.low64()));
                }
                break;
            }
            case Op::PC:
                st.push_back(U256{pc});
                break;
            case Op::GAS:
                st.push_back(U256{gas_left_});
                break;
            case Op::JUMPDEST:
                break;
            case Op::CREATE:
            case Op::CREATE2:
            {
                if (f.is_static)
                    return {Halt::INVALID, {}, pc};
                const U256 value = pop();
                pop();
                pop();
                if (in.op == Op::CREATE2)
                    pop();
                res_.external_calls.push_back({in.op == Op::CREATE ? ExternalCall::Kind::CREATE
                                                                   : ExternalCall::Kind::CREATE2,
                    f.self, Address{}, value, pc, f.depth, false});
                st.push_back(U256{});
                break;
            }
            case Op::CALL:
            case Op::DELEGATECALL:
            case Op::STATICCALL:
            {
                Outcome bad = call(f, in);
                if (bad.halt != Halt::STOP)
                    return bad;
                break;
            }
            case Op::RETURN:
            case Op::REVERT:
            {
                const U256 off = pop(), size = pop();
                Bytes out;
                if (!size.is_zero())
                    out.assign(f.memory.begin() + static_cast<ptrdiff_t>(off.low64()),
                        f.memory.begin() + static_cast<ptrdiff_t>(off.low64() + size.low64()));
                return {in.op == Op::RETURN ? Halt::RETURN : Halt::REVERT, std::move(out), pc};
            }
            case Op::INVALID:
                return {Halt::INVALID, {}, pc};
            case Op::SELFDESTRUCT:
            {
                if (f.is_static)
                    return {Halt::INVALID, {}, pc};
                const Address to = Address::from_word(pop());
                const U256 bal = world_.balance(f.self);
                res_.external_calls.push_back(
                    {ExternalCall::Kind::SELFDESTRUCT, f.self, to, bal, pc, f.depth, false});
                transfer(f.self, to, bal);
                return {Halt::STOP, {}, pc};
            }
            default:
                return {Halt::INVALID, {}, pc};
            }
        }
        if (obs_)
            obs_->after(view(pc), in);
        idx = next;
    }
}

/// Returns STOP to continue the caller, anything else aborts it with that halt.
Outcome Machine::call(Frame& f, const Instruction& in)
{
    auto& st = f.stack;
    auto pop = [&st] {
        U256 v = st.back();
        st.pop_back();
        return v;
    };
    pop();  // forwarded gas: callees share the transaction's counter
    const Address to = Address::from_word(pop());
    U256 value;
    if (in.op == Op::CALL)
        value = pop();
    const U256 in_off = pop(), in_size = pop(), out_off = pop(), out_size = pop();

    if (f.is_static && !value.is_zero())
        return {Halt::INVALID, {}, in.offset};

    ExternalCall rec;
    rec.kind = in.op == Op::CALL           ? ExternalCall::Kind::CALL
               : in.op == Op::DELEGATECALL ? ExternalCall::Kind::DELEGATECALL
                                           : ExternalCall::Kind::STATICCALL;
    rec.from = f.self;
    rec.to = to;
    rec.value = value;
    rec.pc = in.offset;
    rec.depth = f.depth;

    Bytes input;
    if (!in_size.is_zero())
        input.assign(f.memory.begin() + static_cast<ptrdiff_t>(in_off.low64()),
            f.memory.begin() + static_cast<ptrdiff_t>(in_off.low64() + in_size.low64()));

    const ContractBundle* callee = world_.contract(to);
    const size_t m = mark();
    if (callee == nullptr || f.depth + 1 >= max_call_depth)
    {
        const bool ok = callee == nullptr && transfer(f.self, to, value);
        res_.external_calls.push_back(rec);
        if (!ok)
            rollback(m);
        st.push_back(U256{ok ? 1u : 0u});
        return {};
    }

    rec.executed_inline = true;
    res_.external_calls.push_back(rec);
    if (in.op == Op::CALL && !transfer(f.self, to, value))
    {
        st.push_back(U256{});
        return {};
    }
    const auto start = entry_point(*callee, input, world_.fallback_monitor);
    if (!start)
    {
        st.push_back(U256{1});
        return {};
    }

    Frame sub;
    sub.code = callee;
    sub.depth = f.depth + 1;
    sub.start_pc = *start;
    sub.is_static = f.is_static || in.op == Op::STATICCALL;
    if (in.op == Op::DELEGATECALL)
    {
        sub.self = f.self;
        sub.caller = f.caller;
        sub.value = f.value;
    }
    else
    {
        sub.self = to;
        sub.caller = f.self;
        sub.value = value;
    }
    world_.runtime_stack.push_back({to, function_name_for(*callee, input)});
    sub.calldata = std::move(input);
    const Outcome out = run(sub);
    world_.runtime_stack.pop_back();

    const bool ok = out.halt == Halt::STOP || out.halt == Halt::RETURN;
    if (!ok)
        rollback(m);
    const size_t k = std::min<size_t>(out_size.low64(), out.output.size());
    std::copy_n(out.output.begin(), k, f.memory.begin() + static_cast<ptrdiff_t>(out_off.low64()));
    st.push_back(U256{ok ? 1u : 0u});
    return {};
}
}  // namespace

ExecResult execute_tx_inplace(EvmWorld& world, const Transaction& tx, Observer* observer)
{
    const ContractBundle* code = world.contract(tx.destination);
    if (code == nullptr)
        throw Error(ErrorCode::UnknownDestination, tx.destination.to_hex() + " has no code");
    if (tx.call_data.size() < 4)
        throw Error(ErrorCode::MalformedCalldata,
            "calldata has " + std::to_string(tx.call_data.size()) + " bytes, need a 4-byte selector");
    if (world.balance(tx.source) < tx.value)
        throw Error(ErrorCode::InsufficientBalance,
            tx.source.to_hex() + " cannot pay " + tx.value.to_dec() + " wei");

    if (tx.delay > 0)
    {
        world.block.timestamp += tx.delay;
        world.block.number += 1;
    }

    ExecResult res;
    Machine m{world, tx.gas, observer, res};
    m.transfer(tx.source, tx.destination, tx.value);

    const auto start = entry_point(*code, tx.call_data, world.fallback_monitor);
    if (!start)
        return res;

    Frame f;
    f.code = code;
    f.self = tx.destination;
    f.caller = tx.source;
    f.value = tx.value;
    f.calldata = tx.call_data;
    f.start_pc = *start;
    world.runtime_stack.push_back({tx.destination, tx.function_call});
    Outcome out = m.run(f);
    world.runtime_stack.clear();

    res.halt = out.halt;
    res.output = std::move(out.output);
    res.halt_pc = out.pc;
    if (!res.succeeded())
        m.rollback(0);
    res.gas_used = res.halt == Halt::OUT_OF_GAS ? tx.gas : tx.gas - m.gas_left();
    return res;
}

std::pair<EvmWorld, ExecResult> execute_tx(EvmWorld world, const Transaction& tx)
{
    ExecResult r = execute_tx_inplace(world, tx);
    return {std::move(world), std::move(r)};
}

std::pair<EvmWorld, std::vector<ExecResult>> execute_sequence(
    EvmWorld world, const std::vector<Transaction>& txs)
{
    std::vector<ExecResult> out;
    out.reserve(txs.size());
    for (const auto& tx : txs)
        out.push_back(execute_tx_inplace(world, tx));
    return {std::move(world), std::move(out)};
}

Transaction make_tx(const FunctionSig& fn, std::vector<AbiValue> args, const Address& source,
    const Address& destination, const U256& value, uint64_t delay)
{
    Transaction tx;
    tx.function_call = fn.name;
    tx.call_data = encode_calldata(fn, args);
    tx.args = std::move(args);
    tx.source = source;
    tx.destination = destination;
    tx.value = value;
    tx.delay = delay;
    return tx;
}

}  // namespace sctest::evm
