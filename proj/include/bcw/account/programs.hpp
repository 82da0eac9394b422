#pragma once

#include <functional>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "bcw/account/call_data.hpp"
#include "bcw/account/world_state.hpp"

namespace bcw::account {

/// Gas constants. Defaults: 10 per handler entry, 1 per storage read or
/// write, 1 per transaction byte charged before execution.
struct GasSchedule {
    std::uint64_t handler_entry = 10;
    std::uint64_t storage_op = 1;
    std::uint64_t per_byte = 1;
};

struct Event {
    Address contract;
    std::string topic;
    Bytes payload;

    bool operator==(const Event&) const = default;
};

/// Raised by a handler to abort; the whole transaction is reverted.
struct Revert : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OutOfGas : std::runtime_error {
    OutOfGas() : std::runtime_error("out of gas") {}
};

class ProgramRegistry;

/// What a handler sees while it runs: its own storage, the caller, the
/// attached value, a gas meter shared with the whole transaction, and the
/// ability to call other contracts.
class ExecContext {
public:
    ExecContext(WorldState& state, const ProgramRegistry& registry, const GasSchedule& gas, std::uint64_t budget,
                Address origin);

    const Address& self() const { return frames_.back().self; }
    const Address& caller() const { return frames_.back().caller; }
    const Address& origin() const { return origin_; }
    Amount value() const { return frames_.back().value; }

    void charge(std::uint64_t units);
    std::uint64_t gas_left() const { return budget_ - used_; }
    std::uint64_t gas_used() const { return used_; }

    std::optional<Bytes> load(const Bytes& key);
    void store(const Bytes& key, Bytes value);
    void emit(std::string topic, Bytes payload);

    /// Runs `target`'s handler with this contract as caller.
    Bytes call(const Address& target, const CallData& data, Amount value = 0);
    /// Entry used by the state transition.
    Bytes enter(const Address& caller, const Address& target, const CallData& data, Amount value);

    const std::vector<Event>& events() const { return events_; }

private:
    struct Frame {
        Address self;
        Address caller;
        Amount value;
    };

    WorldState& state_;
    const ProgramRegistry& registry_;
    GasSchedule gas_;
    std::uint64_t budget_;
    std::uint64_t used_ = 0;
    Address origin_;
    std::vector<Frame> frames_;
    std::vector<Event> events_;
};

using Handler = std::function<Bytes(ExecContext&, const CallData&)>;

class ProgramRegistry {
public:
    void add(std::string id, Handler h);
    const Handler* find(const std::string& id) const;

    /// token, train, hotel and booking.
    static const ProgramRegistry& builtin();

private:
    std::map<std::string, Handler> handlers_;
};

/// Fungible token: init(supply) credits the deployer. Functions totalSupply,
/// balanceOf(owner), transfer(to, amount), allowance(owner, spender),
/// approve(spender, amount), transferFrom(from, to, amount). Emits Transfer and
/// Approval.
Bytes token_program(ExecContext& ctx, const CallData& call);

/// init(capacity); booking(id) records the transaction origin while seats
/// remain, else reverts; available(); bookerOf(id). Shared by train and hotel.
Bytes reservation_program(ExecContext& ctx, const CallData& call);

/// init(train, hotel); order(id) books both or reverts both.
Bytes booking_program(ExecContext& ctx, const CallData& call);

} // namespace bcw::account
