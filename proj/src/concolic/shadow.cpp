// sctest: hybrid smart-contract testing engine
// Copyright 2026 The sctest Authors.
// SPDX-License-Identifier: Apache-2.0

#include <sctest/bytecode/keccak.hpp>
#include <sctest/bytecode/opcodes.hpp>
#include <sctest/concolic/shadow.hpp>
#include <sctest/evm/calldata.hpp>

namespace sctest::concolic
{
using bytecode::AbiType;
using bytecode::Op;

SymRef PathConstraint::held() const
{
    return taken ? predicate : unop(SymOp::ISZERO, predicate);
}

SymRef PathConstraint::flipped() const
{
    return taken ? unop(SymOp::ISZERO, predicate) : predicate;
}

std::vector<InputVar> input_vars(const FunctionSig& fn, const std::vector<AbiValue>& args)
{
    std::vector<InputVar> out;
    const auto layout = evm::calldata_layout(fn, args);
    for (size_t p = 0; p < fn.params.size(); ++p)
    {
        const auto& t = fn.params[p];
        const auto param = static_cast<uint16_t>(p);
        if (!t.is_dynamic())
        {
            out.push_back({{param, 0, VarKind::word}, t.bits, layout[p].head, false});
            continue;
        }
        out.push_back({{param, 0, VarKind::length}, 256, layout[p].length_word, false});
        const bool bytes = t.kind == AbiType::Kind::bytes;
        for (uint32_t i = 0; i < layout[p].count; ++i)
            out.push_back({{param, i, VarKind::element}, bytes ? 8u : t.bits,
                layout[p].payload + (bytes ? i : 32 * i), bytes});
    }
    return out;
}

std::map<VarId, U256> values_of(const FunctionSig& fn, const std::vector<AbiValue>& args)
{
    std::map<VarId, U256> out;
    for (const auto& v : input_vars(fn, args))
    {
        const auto& a = args[v.id.param];
        const bool bytes = fn.params[v.id.param].kind == AbiType::Kind::bytes;
        switch (v.id.kind)
        {
        case VarKind::word:
            out[v.id] = a.word;
            break;
        case VarKind::length:
            out[v.id] = U256{bytes ? a.bytes.size() : a.items.size()};
            break;
        case VarKind::element:
            out[v.id] = bytes ? U256{a.bytes[v.id.index]} : a.items[v.id.index];
            break;
        }
    }
    return out;
}

std::vector<AbiValue> apply_model(const FunctionSig& fn, std::vector<AbiValue> args,
    const std::map<VarId, U256>& model)
{
    for (const auto& [id, value] : model)
    {
        if (id.param >= args.size())
            continue;
        auto& a = args[id.param];
        const bool bytes = fn.params[id.param].kind == AbiType::Kind::bytes;
        if (id.kind == VarKind::word)
            a.word = value;
        else if (id.kind == VarKind::element && bytes && id.index < a.bytes.size())
            a.bytes[id.index] = static_cast<uint8_t>(value.low64());
        else if (id.kind == VarKind::element && !bytes && id.index < a.items.size())
            a.items[id.index] = value;
    }
    return args;
}

std::string var_name(const FunctionSig& fn, const VarId& v)
{
    std::string base = v.param < fn.param_names.size() && !fn.param_names[v.param].empty()
                           ? fn.param_names[v.param]
                           : "in" + std::to_string(v.param);
    switch (v.kind)
    {
    case VarKind::word:
        return base;
    case VarKind::element:
        return base + "[" + std::to_string(v.index) + "]";
    case VarKind::length:
        return base + ".length";
    }
    return base;
}

void PreimageTable::add(const U256& digest, const Bytes& preimage)
{
    std::lock_guard lock{mu_};
    table_.emplace(digest, preimage);
}

std::optional<Bytes> PreimageTable::find(const U256& digest) const
{
    std::lock_guard lock{mu_};
    const auto it = table_.find(digest);
    if (it == table_.end())
        return std::nullopt;
    return it->second;
}

size_t PreimageTable::size() const
{
    std::lock_guard lock{mu_};
    return table_.size();
}

namespace
{
/// Byte k (0 = most significant) of expr's 32-byte big-endian value.
struct ByteSrc
{
    SymRef expr;
    uint8_t k = 0;
    bool whole_word = false;  ///< comes from a full-word input variable
};

using ByteMap = std::map<uint64_t, ByteSrc>;

/// Limits tracked copies; anything this large runs out of gas first.
constexpr uint64_t max_tracked_span = uint64_t{1} << 24;

SymRef byte_term(const ByteSrc& b)
{
    SymRef v = binop(SymOp::SHR, constant(U256{8u * (31u - b.k)}), b.expr);
    return binop(SymOp::AND, v, constant(0xff));
}

/// Assembles the word at `off` from tracked bytes; nullptr when none is symbolic.
SymRef read_word(const ByteMap& map, uint64_t off, const U256& concrete, bool allow_partial_words)
{
    auto it = map.lower_bound(off);
    if (it == map.end() || it->first >= off + 32)
        return nullptr;
    // Exactly one expression, byte-aligned: return it whole.
    {
        auto j = it;
        const SymRef& e = it->second.expr;
        uint64_t n = 0;
        for (; j != map.end() && j->first < off + 32; ++j, ++n)
            if (j->second.expr != e || j->first != off + n || j->second.k != n)
                break;
        if (n == 32)
            return e;
    }
    auto be = concrete.to_be();
    std::vector<std::pair<uint64_t, const ByteSrc*>> syms;
    for (auto j = it; j != map.end() && j->first < off + 32; ++j)
    {
        if (j->second.whole_word && !allow_partial_words)
            return nullptr;
        be[j->first - off] = 0;
        syms.emplace_back(j->first - off, &j->second);
    }
    SymRef out = constant(U256::from_be(be));
    for (const auto& [pos, src] : syms)
        out = binop(SymOp::OR, out,
            binop(SymOp::SHL, constant(U256{8u * (31u - static_cast<unsigned>(pos))}), byte_term(*src)));
    return out;
}

void erase_range(ByteMap& map, uint64_t off, uint64_t len)
{
    map.erase(map.lower_bound(off), map.lower_bound(off + len));
}

class Shadow final : public evm::Observer
{
public:
    Shadow(const FunctionSig* fn, const std::vector<AbiValue>& args, PreimageTable* preimages)
      : preimages_{preimages}
    {
        if (!fn)
            return;
        for (const auto& v : input_vars(*fn, args))
        {
            const auto e = input(v.id, v.bits);
            if (v.single_byte)
                calldata_[v.offset] = {e, 31, false};
            else
                for (uint8_t k = 0; k < 32; ++k)
                    calldata_[v.offset + k] = {e, k, true};
        }
    }

    std::vector<PathConstraint> constraints;

    void before(const evm::FrameView& f, const bytecode::Instruction& ins) override
    {
        if (f.depth != 0)
            return;
        if (stack_.size() != f.stack.size())
            stack_.assign(f.stack.size(), nullptr);
        pending_.clear();
        hash_input_.reset();

        const auto sym = [&](size_t i) -> const SymRef& { return stack_[stack_.size() - 1 - i]; };
        const auto val = [&](size_t i) -> const U256& { return f.stack[f.stack.size() - 1 - i]; };
        const auto expr = [&](size_t i) { return sym(i) ? sym(i) : constant(val(i)); };
        const auto small = [&](size_t i) { return val(i) < U256{max_tracked_span}; };
        auto result = [&](SymRef e) { pending_.push_back(e && !is_const(e) ? std::move(e) : nullptr); };

        const Op op = ins.op;
        if (bytecode::is_binary_value_op(op))
        {
            result(sym(0) || sym(1) ? binop(sym_op(op), expr(0), expr(1)) : nullptr);
            return;
        }
        switch (op)
        {
        case Op::ISZERO:
        case Op::NOT:
            result(sym(0) ? unop(op == Op::ISZERO ? SymOp::ISZERO : SymOp::NOT, sym(0)) : nullptr);
            return;
        case Op::CALLDATALOAD:
            result(small(0) ? read_word(calldata_, val(0).low64(), load_calldata(f, val(0).low64()), false)
                            : nullptr);
            return;
        case Op::MLOAD:
            result(small(0) ? read_word(memory_, val(0).low64(), load_memory(f, val(0).low64()), true) : nullptr);
            return;
        case Op::MSTORE:
            if (small(0))
            {
                const uint64_t o = val(0).low64();
                erase_range(memory_, o, 32);
                if (sym(1))
                    for (uint8_t k = 0; k < 32; ++k)
                        memory_[o + k] = {sym(1), k, false};
            }
            else
                memory_.clear();
            return;
        case Op::MSTORE8:
            if (small(0))
            {
                const uint64_t o = val(0).low64();
                memory_.erase(o);
                if (sym(1))
                    memory_[o] = {sym(1), 31, false};
            }
            else
                memory_.clear();
            return;
        case Op::CALLDATACOPY:
            if (small(0) && small(1) && small(2))
            {
                const uint64_t dst = val(0).low64(), src = val(1).low64(), len = val(2).low64();
                erase_range(memory_, dst, len);
                for (auto it = calldata_.lower_bound(src); it != calldata_.end() && it->first < src + len; ++it)
                {
                    auto b = it->second;
                    b.whole_word = false;
                    memory_[dst + (it->first - src)] = b;
                }
            }
            else
                memory_.clear();
            return;
        case Op::SHA3:
            if (small(0) && small(1))
                hash_input_ = hash(f, val(0).low64(), val(1).low64());
            result(nullptr);  // replaced in after() when the buffer is symbolic
            return;
        case Op::SLOAD:
            if (sym(0))
                result(wrote_storage_ ? nullptr : sload(sym(0)));
            else
            {
                const auto it = storage_.find(val(0));
                result(it == storage_.end() ? nullptr : it->second);
            }
            return;
        case Op::SSTORE:
            wrote_storage_ = true;
            if (sym(0))
                storage_.clear();
            else if (sym(1))
                storage_[val(0)] = sym(1);
            else
                storage_.erase(val(0));
            return;
        case Op::JUMPI:
            if (sym(1))
                constraints.push_back({sym(1), f.pc, !val(1).is_zero()});
            return;
        case Op::CALL:
            clobber(f, 5, 6);
            break;
        case Op::DELEGATECALL:
        case Op::STATICCALL:
            clobber(f, 4, 5);
            break;
        default:
            break;
        }
        for (unsigned i = 0; i < bytecode::op_info(ins.byte).outputs; ++i)
            pending_.push_back(nullptr);
    }

    void after(const evm::FrameView& f, const bytecode::Instruction& ins) override
    {
        if (f.depth != 0)
            return;
        const uint8_t b = ins.byte;
        if (b >= 0x80 && b <= 0x8f)
        {
            const size_t n = b - 0x80u + 1;
            stack_.push_back(stack_.size() >= n ? stack_[stack_.size() - n] : nullptr);
        }
        else if (b >= 0x90 && b <= 0x9f)
        {
            const size_t n = b - 0x90u + 1;
            if (stack_.size() > n)
                std::swap(stack_[stack_.size() - 1], stack_[stack_.size() - 1 - n]);
        }
        else
        {
            const size_t pops = std::min<size_t>(bytecode::op_info(b).inputs, stack_.size());
            stack_.resize(stack_.size() - pops);
            if (ins.op == Op::SHA3 && hash_input_)
            {
                if (preimages_)
                    preimages_->add(f.stack.back(), hash_input_->concrete);
                pending_.assign(1, hash_input_->node && !is_const(hash_input_->node) ? hash_input_->node : nullptr);
            }
            for (auto& p : pending_)
                stack_.push_back(std::move(p));
        }
        if (stack_.size() != f.stack.size())
            stack_.assign(f.stack.size(), nullptr);  // lost track; everything is concrete again
    }

private:
    struct HashInput
    {
        Bytes concrete;
        SymRef node;  ///< nullptr when the buffer is fully concrete
    };

    static SymOp sym_op(Op op)
    {
        switch (op)
        {
        case Op::ADD: return SymOp::ADD;
        case Op::MUL: return SymOp::MUL;
        case Op::SUB: return SymOp::SUB;
        case Op::DIV: return SymOp::DIV;
        case Op::MOD: return SymOp::MOD;
        case Op::EXP: return SymOp::EXP;
        case Op::LT: return SymOp::LT;
        case Op::GT: return SymOp::GT;
        case Op::EQ: return SymOp::EQ;
        case Op::AND: return SymOp::AND;
        case Op::OR: return SymOp::OR;
        case Op::XOR: return SymOp::XOR;
        case Op::SHL: return SymOp::SHL;
        case Op::SHR: return SymOp::SHR;
        default: return SymOp::ADD;
        }
    }

    static U256 load_calldata(const evm::FrameView& f, uint64_t off)
    {
        std::array<uint8_t, 32> w{};
        for (size_t i = 0; i < 32; ++i)
            if (off + i < f.calldata.size())
                w[i] = f.calldata[off + i];
        return U256::from_be(w);
    }

    static U256 load_memory(const evm::FrameView& f, uint64_t off)
    {
        std::array<uint8_t, 32> w{};
        for (size_t i = 0; i < 32; ++i)
            if (off + i < f.memory.size())
                w[i] = f.memory[off + i];
        return U256::from_be(w);
    }

    HashInput hash(const evm::FrameView& f, uint64_t off, uint64_t len) const
    {
        HashInput h;
        h.concrete.resize(len, 0);
        for (uint64_t i = 0; i < len && off + i < f.memory.size(); ++i)
            h.concrete[i] = f.memory[off + i];
        std::vector<SymRef> words;
        bool symbolic = false;
        for (uint64_t w = 0; w < len; w += 32)
        {
            auto e = read_word(memory_, off + w, load_memory(f, off + w), true);
            symbolic = symbolic || e;
            words.push_back(e ? e : constant(load_memory(f, off + w)));
        }
        if (symbolic)
            h.node = keccak(std::move(words), static_cast<uint32_t>(len));
        return h;
    }

    void clobber(const evm::FrameView& f, size_t off_arg, size_t len_arg)
    {
        const auto& off = f.stack[f.stack.size() - 1 - off_arg];
        const auto& len = f.stack[f.stack.size() - 1 - len_arg];
        if (off < U256{max_tracked_span} && len < U256{max_tracked_span})
            erase_range(memory_, off.low64(), len.low64());
        else
            memory_.clear();
    }

    PreimageTable* preimages_;
    std::vector<SymRef> stack_;
    ByteMap calldata_;
    ByteMap memory_;
    std::map<U256, SymRef> storage_;
    bool wrote_storage_ = false;
    std::vector<SymRef> pending_;
    std::optional<HashInput> hash_input_;
};
}  // namespace

SymTrace sym_execute(const evm::EvmWorld& world, const std::vector<evm::Transaction>& prefix,
    const evm::Transaction& tx, evm::SnapshotCache* cache, PreimageTable* preimages)
{
    std::shared_ptr<const evm::Snapshot> snap;
    if (cache)
        snap = cache->get_or_create(evm::prefix_key(prefix), [&] { return evm::snapshot_of(world, prefix); });
    else
        snap = std::make_shared<const evm::Snapshot>(evm::snapshot_of(world, prefix));

    evm::EvmWorld w = snap->world;
    const auto* bundle = w.contract(tx.destination);
    const FunctionSig* fn = bundle ? bundle->function(tx.function_call) : nullptr;
    if (fn && tx.args.size() != fn->params.size())
        fn = nullptr;

    SymTrace out;
    if (fn)
        out.env.values = values_of(*fn, tx.args);
    if (const auto it = w.storage.find(tx.destination); it != w.storage.end())
        out.env.storage = it->second;
    Shadow shadow{fn, tx.args, preimages};
    out.result = evm::execute_tx_inplace(w, tx, &shadow);
    out.constraints = std::move(shadow.constraints);
    return out;
}

}  // namespace sctest::concolic
