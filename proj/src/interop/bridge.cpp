#include "bcw/interop/bridge.hpp"

#include <json.hpp>

namespace bcw::interop {

std::string_view to_string(BridgeMode m) { return m == BridgeMode::Pooled ? "pooled" : "burn_mint"; }
std::string_view to_string(ChainSide s) { return s == ChainSide::X ? "X" : "Y"; }

std::string_view to_string(TransferStatus s) {
    switch (s) {
    case TransferStatus::Pending: return "pending";
    case TransferStatus::Completed: return "completed";
    case TransferStatus::Refunded: return "refunded";
    }
    return "pending";
}

Bridge::Bridge(BridgeConfig config) : config_(config) {
    if (config_.pool_y > 0) y_.mint(std::string(kPoolY), config_.pool_y);
    if (config_.mode == BridgeMode::Pooled && config_.pool_x > 0) x_.mint(std::string(kPoolX), config_.pool_x);
    initial_total_ = x_.total_supply() + y_.total_supply();
}

void Bridge::fund(ChainSide side, const Party& p, Amount amount) {
    chain(side).mint(p, amount);
    initial_total_ += amount;
}

std::uint64_t Bridge::begin(ChainSide from, const Party& sender, const Party& receiver, Amount amount) {
    if (amount <= 0) throw InteropError(InteropErrc::BadAmount, "transfer must be positive");
    JournalEntry e{journal_.size() + 1, from, sender, receiver, amount, TransferStatus::Pending};
    journal_.push_back(e);
    return e.id;
}

bool Bridge::complete(JournalEntry& e) {
    const bool to_y = e.from == ChainSide::X;
    const std::string amt = std::to_string(e.amount);
    if (config_.mode == BridgeMode::BurnMint && !to_y) {
        x_.mint(e.receiver, e.amount);
        minted_x_ += e.amount;
        e.status = TransferStatus::Completed;
        events_.push_back("#" + std::to_string(e.id) + " operator mints " + amt + " USDX to " + e.receiver);
        return true;
    }
    const std::string pool(to_y ? kPoolY : kPoolX);
    auto& dest = to_y ? y_ : x_;
    auto& src = to_y ? x_ : y_;
    if (dest.balance(pool) < e.amount) {
        // Undo the source leg.
        if (config_.mode == BridgeMode::BurnMint) {
            x_.mint(e.sender, e.amount);
            minted_x_ += e.amount;
        } else {
            src.transfer(std::string(to_y ? kPoolX : kPoolY), e.sender, e.amount);
        }
        e.status = TransferStatus::Refunded;
        events_.push_back("#" + std::to_string(e.id) + " reserve " + pool + " short, " + amt + " refunded to " + e.sender);
        return false;
    }
    dest.transfer(pool, e.receiver, e.amount);
    e.status = TransferStatus::Completed;
    events_.push_back("#" + std::to_string(e.id) + " operator pays " + amt + " " + dest.token() + " from " + pool +
                      " to " + e.receiver);
    return true;
}

std::uint64_t Bridge::transfer(ChainSide from, const Party& sender, const Party& receiver, Amount amount) {
    if (config_.mode != BridgeMode::Pooled) throw InteropError(InteropErrc::WrongMode, "bridge is in burn-mint mode");
    const auto id = begin(from, sender, receiver, amount);
    auto& src = chain(from);
    try {
        src.transfer(sender, std::string(from == ChainSide::X ? kPoolX : kPoolY), amount);
    } catch (...) {
        journal_.pop_back();
        throw;
    }
    events_.push_back("#" + std::to_string(id) + " " + sender + " deposits " + std::to_string(amount) + " " +
                      src.token() + " into " + std::string(from == ChainSide::X ? kPoolX : kPoolY));
    if (!up_) return id;
    if (!complete(journal_.back()))
        throw InteropError(InteropErrc::InsufficientReserve, "destination reserve below " + std::to_string(amount));
    return id;
}

std::uint64_t Bridge::wrap(const Party& sender, const Party& receiver, Amount amount) {
    if (config_.mode != BridgeMode::BurnMint) throw InteropError(InteropErrc::WrongMode, "bridge is in pooled mode");
    const auto id = begin(ChainSide::Y, sender, receiver, amount);
    try {
        y_.transfer(sender, std::string(kPoolY), amount);
    } catch (...) {
        journal_.pop_back();
        throw;
    }
    events_.push_back("#" + std::to_string(id) + " " + sender + " deposits " + std::to_string(amount) +
                      " USDY into LP_Y");
    if (up_) complete(journal_.back());
    return id;
}

std::uint64_t Bridge::unwrap(const Party& sender, const Party& receiver, Amount amount) {
    if (config_.mode != BridgeMode::BurnMint) throw InteropError(InteropErrc::WrongMode, "bridge is in pooled mode");
    const auto id = begin(ChainSide::X, sender, receiver, amount);
    try {
        x_.burn(sender, amount);
    } catch (...) {
        journal_.pop_back();
        throw;
    }
    minted_x_ -= amount;
    events_.push_back("#" + std::to_string(id) + " operator burns " + std::to_string(amount) + " USDX of " + sender);
    if (up_ && !complete(journal_.back()))
        throw InteropError(InteropErrc::InsufficientReserve, "LP_Y below " + std::to_string(amount));
    return id;
}

std::vector<std::uint64_t> Bridge::restart() {
    up_ = true;
    std::size_t pending = 0;
    for (const auto& e : journal_) pending += e.status == TransferStatus::Pending;
    events_.push_back("operator restarts, replaying " + std::to_string(pending) + " pending leg(s)");
    std::vector<std::uint64_t> done;
    for (auto& e : journal_) {
        if (e.status != TransferStatus::Pending) continue;
        complete(e);
        done.push_back(e.id);
    }
    return done;
}

bool Bridge::pooled_invariant() const { return x_.total_supply() + y_.total_supply() == initial_total_; }

bool Bridge::burn_mint_invariant() const { return minted_x_ == pool_y() - config_.pool_y; }

std::string BridgeReport::to_json() const {
    nlohmann::ordered_json j;
    j["events"] = events;
    j["chain_x"] = chain_x;
    j["chain_y"] = chain_y;
    j["invariant_holds"] = invariant_holds;
    return j.dump(2) + "\n";
}

namespace {

[[noreturn]] void bad(const std::string& m) { throw InteropError(InteropErrc::BadScript, m); }

Amount amount_of(const nlohmann::json& v) {
    if (!v.is_number_integer()) bad("amounts must be integers");
    return v.get<Amount>();
}

std::string str_of(const nlohmann::json& v) {
    if (!v.is_string()) bad("expected a string");
    return v.get<std::string>();
}

ChainSide side_of(const nlohmann::json& v) {
    const auto s = str_of(v);
    if (s == "X") return ChainSide::X;
    if (s == "Y") return ChainSide::Y;
    bad("chain must be \"X\" or \"Y\"");
}

void only(const nlohmann::json& a, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, _] : a.items()) {
        bool ok = false;
        for (auto key : keys) ok = ok || k == key;
        if (!ok) bad("unknown key '" + k + "'");
    }
    for (auto key : keys)
        if (!a.contains(std::string(key))) bad("missing key '" + std::string(key) + "'");
}

} // namespace

BridgeReport run_bridge_script(std::string_view json_text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(json_text);
    } catch (const nlohmann::json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
    if (!doc.is_object()) bad("bridge script must be an object");
    BridgeConfig cfg;
    for (const auto& [k, v] : doc.items()) {
        if (k == "mode") {
            const auto m = str_of(v);
            if (m == "pooled")
                cfg.mode = BridgeMode::Pooled;
            else if (m == "burn_mint")
                cfg.mode = BridgeMode::BurnMint;
            else
                bad("unknown mode '" + m + "'");
        } else if (k == "pool_x") {
            cfg.pool_x = amount_of(v);
        } else if (k == "pool_y") {
            cfg.pool_y = amount_of(v);
        } else if (k != "fund" && k != "actions") {
            bad("unknown key '" + k + "'");
        }
    }
    if (cfg.pool_x < 0 || cfg.pool_y < 0) bad("pools cannot be negative");
    Bridge br(cfg);
    if (doc.contains("fund")) {
        if (!doc["fund"].is_object()) bad("'fund' must be an object");
        for (const auto& [chain, holders] : doc["fund"].items()) {
            const auto side = side_of(chain);
            if (!holders.is_object()) bad("'fund' entries must be objects");
            for (const auto& [who, amt] : holders.items()) br.fund(side, who, amount_of(amt));
        }
    }
    BridgeReport rep;
    const auto& actions = doc.contains("actions") ? doc["actions"] : nlohmann::json::array();
    if (!actions.is_array()) bad("'actions' must be a list");
    for (const auto& a : actions) {
        if (!a.is_object() || !a.contains("action")) bad("each action needs an 'action' field");
        const auto kind = str_of(a["action"]);
        const auto before = br.events().size();
        try {
            if (kind == "transfer") {
                only(a, {"action", "from", "sender", "receiver", "amount"});
                br.transfer(side_of(a["from"]), str_of(a["sender"]), str_of(a["receiver"]), amount_of(a["amount"]));
            } else if (kind == "wrap" || kind == "unwrap") {
                only(a, {"action", "sender", "receiver", "amount"});
                if (kind == "wrap")
                    br.wrap(str_of(a["sender"]), str_of(a["receiver"]), amount_of(a["amount"]));
                else
                    br.unwrap(str_of(a["sender"]), str_of(a["receiver"]), amount_of(a["amount"]));
            } else if (kind == "crash") {
                only(a, {"action"});
                br.crash();
                rep.events.push_back("operator crashes");
            } else if (kind == "restart") {
                only(a, {"action"});
                br.restart();
            } else {
                bad("unknown action '" + kind + "'");
            }
        } catch (const InteropError& e) {
            if (e.code() == InteropErrc::BadScript) throw;
            for (auto i = before; i < br.events().size(); ++i) rep.events.push_back(br.events()[i]);
            rep.events.push_back(std::string("rejected: ") + e.what());
            continue;
        }
        for (auto i = before; i < br.events().size(); ++i) rep.events.push_back(br.events()[i]);
    }
    rep.chain_x = br.chain(ChainSide::X).balances();
    rep.chain_y = br.chain(ChainSide::Y).balances();
    rep.invariant_holds = cfg.mode == BridgeMode::Pooled ? br.pooled_invariant() : br.burn_mint_invariant();
    return rep;
}

} // namespace bcw::interop
