#include "bcw/account/programs.hpp"

namespace bcw::account {

ExecContext::ExecContext(WorldState& state, const ProgramRegistry& registry, const GasSchedule& gas,
                         std::uint64_t budget, Address origin)
    : state_(state), registry_(registry), gas_(gas), budget_(budget), origin_(origin) {}

void ExecContext::charge(std::uint64_t units) {
    if (units > budget_ - used_) {
        used_ = budget_;
        throw OutOfGas();
    }
    used_ += units;
}

std::optional<Bytes> ExecContext::load(const Bytes& key) {
    charge(gas_.storage_op);
    const Account* acct = state_.find(self());
    if (!acct) return std::nullopt;
    auto it = acct->storage.find(key);
    if (it == acct->storage.end()) return std::nullopt;
    return it->second;
}

void ExecContext::store(const Bytes& key, Bytes value) {
    charge(gas_.storage_op);
    state_.at(self()).storage[key] = std::move(value);
}

void ExecContext::emit(std::string topic, Bytes payload) {
    events_.push_back({self(), std::move(topic), std::move(payload)});
}

Bytes ExecContext::enter(const Address& caller, const Address& target, const CallData& data, Amount value) {
    charge(gas_.handler_entry);
    const Account* acct = state_.find(target);
    if (!acct || acct->kind != AccountKind::Contract) throw Revert("call target is not a contract");
    const Handler* h = registry_.find(acct->program_id);
    if (!h) throw Revert("UnknownProgram " + acct->program_id);
    if (frames_.size() >= 64) throw Revert("call depth exceeded");
    frames_.push_back({target, caller, value});
    try {
        Bytes out = (*h)(*this, data);
        frames_.pop_back();
        return out;
    } catch (...) {
        frames_.pop_back();
        throw;
    }
}

Bytes ExecContext::call(const Address& target, const CallData& data, Amount value) {
    if (value < 0) throw Revert("negative value");
    if (value > 0) {
        Account& me = state_.at(self());
        if (me.balance < value) throw Revert("insufficient contract balance");
        me.balance -= value;
        state_.at(target).balance += value;
    }
    return enter(self(), target, data, value);
}

void ProgramRegistry::add(std::string id, Handler h) { handlers_[std::move(id)] = std::move(h); }

const Handler* ProgramRegistry::find(const std::string& id) const {
    auto it = handlers_.find(id);
    return it == handlers_.end() ? nullptr : &it->second;
}

const ProgramRegistry& ProgramRegistry::builtin() {
    static const ProgramRegistry reg = [] {
        ProgramRegistry r;
        r.add("token", token_program);
        r.add("train", reservation_program);
        r.add("hotel", reservation_program);
        r.add("booking", booking_program);
        return r;
    }();
    return reg;
}

namespace {

Bytes skey(std::string_view prefix, std::initializer_list<Address> parts) {
    Bytes k(prefix.begin(), prefix.end());
    for (const auto& a : parts) k.insert(k.end(), a.payload.begin(), a.payload.end());
    return k;
}

Bytes skey(std::string_view prefix, std::uint64_t id) {
    Bytes k(prefix.begin(), prefix.end());
    auto v = arg_u64(id);
    k.insert(k.end(), v.begin(), v.end());
    return k;
}

std::uint64_t load_u64(ExecContext& ctx, const Bytes& key) {
    auto v = ctx.load(key);
    return v ? as_u64(*v) : 0;
}

void need_args(const CallData& call, std::size_t n) {
    if (call.args.size() != n) throw Revert(call.function + " expects " + std::to_string(n) + " argument(s)");
}

Bytes transfer_payload(const Address& from, const Address& to, std::uint64_t amount) {
    Bytes p = arg_address(from);
    auto t = arg_address(to);
    auto a = arg_u64(amount);
    p.insert(p.end(), t.begin(), t.end());
    p.insert(p.end(), a.begin(), a.end());
    return p;
}

void move_tokens(ExecContext& ctx, const Address& from, const Address& to, std::uint64_t amount) {
    const Bytes from_key = skey("bal:", {from});
    const std::uint64_t from_bal = load_u64(ctx, from_key);
    if (from_bal < amount) throw Revert("token balance too low");
    ctx.store(from_key, arg_u64(from_bal - amount));
    const Bytes to_key = skey("bal:", {to});
    ctx.store(to_key, arg_u64(load_u64(ctx, to_key) + amount));
    ctx.emit("Transfer", transfer_payload(from, to, amount));
}

} // namespace

Bytes token_program(ExecContext& ctx, const CallData& call) {
    const auto& fn = call.function;
    try {
        if (fn == "init") {
            need_args(call, 1);
            const std::uint64_t supply = as_u64(call.args[0]);
            ctx.store(Bytes{'s', 'u', 'p', 'p', 'l', 'y'}, arg_u64(supply));
            ctx.store(skey("bal:", {ctx.caller()}), arg_u64(supply));
            ctx.emit("Transfer", transfer_payload(Address{}, ctx.caller(), supply));
            return {};
        }
        if (fn == "totalSupply") {
            need_args(call, 0);
            return arg_u64(load_u64(ctx, Bytes{'s', 'u', 'p', 'p', 'l', 'y'}));
        }
        if (fn == "balanceOf") {
            need_args(call, 1);
            return arg_u64(load_u64(ctx, skey("bal:", {as_address(call.args[0])})));
        }
        if (fn == "transfer") {
            need_args(call, 2);
            move_tokens(ctx, ctx.caller(), as_address(call.args[0]), as_u64(call.args[1]));
            return {1};
        }
        if (fn == "allowance") {
            need_args(call, 2);
            return arg_u64(load_u64(ctx, skey("allow:", {as_address(call.args[0]), as_address(call.args[1])})));
        }
        if (fn == "approve") {
            need_args(call, 2);
            const Address spender = as_address(call.args[0]);
            const std::uint64_t amount = as_u64(call.args[1]);
            ctx.store(skey("allow:", {ctx.caller(), spender}), arg_u64(amount));
            ctx.emit("Approval", transfer_payload(ctx.caller(), spender, amount));
            return {1};
        }
        if (fn == "transferFrom") {
            need_args(call, 3);
            const Address from = as_address(call.args[0]);
            const Address to = as_address(call.args[1]);
            const std::uint64_t amount = as_u64(call.args[2]);
            const Bytes allow_key = skey("allow:", {from, ctx.caller()});
            const std::uint64_t allowed = load_u64(ctx, allow_key);
            if (allowed < amount) throw Revert("allowance too low");
            ctx.store(allow_key, arg_u64(allowed - amount));
            move_tokens(ctx, from, to, amount);
            return {1};
        }
    } catch (const DomainError& e) {
        throw Revert(e.what());
    }
    throw Revert("token has no function " + fn);
}

Bytes reservation_program(ExecContext& ctx, const CallData& call) {
    static const Bytes kCapacity{'c', 'a', 'p'};
    static const Bytes kCount{'c', 'o', 'u', 'n', 't'};
    const auto& fn = call.function;
    try {
        if (fn == "init") {
            need_args(call, 1);
            as_u64(call.args[0]);
            ctx.store(kCapacity, call.args[0]);
            ctx.store(kCount, arg_u64(0));
            return {};
        }
        if (fn == "booking") {
            need_args(call, 1);
            const std::uint64_t id = as_u64(call.args[0]);
            const Bytes booker_key = skey("booker:", id);
            if (ctx.load(booker_key)) throw Revert("booking id already used");
            const std::uint64_t count = load_u64(ctx, kCount);
            if (count >= load_u64(ctx, kCapacity)) throw Revert("fully booked");
            ctx.store(booker_key, arg_address(ctx.origin()));
            ctx.store(kCount, arg_u64(count + 1));
            ctx.emit("Booked", arg_u64(id));
            return {1};
        }
        if (fn == "available") {
            need_args(call, 0);
            return arg_u64(load_u64(ctx, kCapacity) - load_u64(ctx, kCount));
        }
        if (fn == "bookerOf") {
            need_args(call, 1);
            auto v = ctx.load(skey("booker:", as_u64(call.args[0])));
            return v ? *v : Bytes{};
        }
    } catch (const DomainError& e) {
        throw Revert(e.what());
    }
    throw Revert("reservation has no function " + fn);
}

Bytes booking_program(ExecContext& ctx, const CallData& call) {
    static const Bytes kTrain{'t', 'r', 'a', 'i', 'n'};
    static const Bytes kHotel{'h', 'o', 't', 'e', 'l'};
    const auto& fn = call.function;
    try {
        if (fn == "init") {
            need_args(call, 2);
            as_address(call.args[0]);
            as_address(call.args[1]);
            ctx.store(kTrain, call.args[0]);
            ctx.store(kHotel, call.args[1]);
            return {};
        }
        if (fn == "order") {
            need_args(call, 1);
            auto train = ctx.load(kTrain);
            auto hotel = ctx.load(kHotel);
            if (!train || !hotel) throw Revert("booking not initialised");
            const CallData book{"booking", {call.args[0]}};
            ctx.call(as_address(*train), book);
            ctx.call(as_address(*hotel), book);
            ctx.emit("Ordered", call.args[0]);
            return {1};
        }
    } catch (const DomainError& e) {
        throw Revert(e.what());
    }
    throw Revert("booking has no function " + fn);
}

} // namespace bcw::account
