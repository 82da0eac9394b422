#include "bcw/plasma/scenario.hpp"

#include <cmath>

#include <json.hpp>

#include "bcw/ledger/wallet.hpp"

namespace bcw::plasma {

using nlohmann::json;
using nlohmann::ordered_json;

std::string format_coin(Amount a) {
    std::string sign = a < 0 ? "-" : "";
    const auto mag = static_cast<std::uint64_t>(a < 0 ? -a : a);
    std::string out = sign + std::to_string(mag / ledger::kCoin);
    auto frac = mag % ledger::kCoin;
    if (frac == 0) return out;
    std::string digits = std::to_string(frac);
    digits.insert(0, 8 - digits.size(), '0');
    while (digits.back() == '0') digits.pop_back();
    return out + "." + digits;
}

std::string Transcript::to_json() const {
    ordered_json steps_j = ordered_json::array();
    for (const auto& s : steps) {
        ordered_json j;
        j["step"] = s.index;
        j["action"] = s.action;
        j["events"] = s.events;
        j["state"] = s.state;
        ordered_json plasma = ordered_json::object(), layer1 = ordered_json::object();
        for (const auto& [k, v] : s.plasma_balances) plasma[k] = format_coin(v);
        for (const auto& [k, v] : s.layer1_balances) layer1[k] = format_coin(v);
        j["plasma_balances"] = plasma;
        j["layer1_balances"] = layer1;
        steps_j.push_back(j);
    }
    ordered_json root;
    root["steps"] = steps_j;
    return root.dump(2) + "\n";
}

namespace {

constexpr std::string_view kOperator = "Operator";

std::string err_text(const DomainError& e) { return "rejected: " + std::string(e.what()); }

} // namespace

PlasmaWorld::PlasmaWorld(ScenarioConfig config)
    : config_(config),
      chain_(crypto::keypair_from_label("plasma-" + std::string(kOperator))),
      root_(ledger::address_of(chain_.operator_key()), config.root) {
    parties_.push_back({std::string(kOperator), chain_.operator_key(), chain_.operator_address(), false});
    by_address_[parties_.back().address] = 0;
    root_.fund(parties_.back().address, config_.initial_layer1);
}

PlasmaWorld::Party& PlasmaWorld::ensure(const std::string& name, bool honest) {
    for (auto& p : parties_)
        if (p.name == name) return p;
    Party p;
    p.name = name;
    p.key = crypto::keypair_from_label("plasma-" + name);
    p.address = ledger::address_of(p.key);
    p.honest = honest;
    by_address_[p.address] = parties_.size();
    parties_.push_back(std::move(p));
    root_.fund(parties_.back().address, config_.initial_layer1);
    return parties_.back();
}

const PlasmaWorld::Party& PlasmaWorld::party(const std::string& name) { return ensure(name); }

std::string PlasmaWorld::name_of(const Address& a) const {
    auto it = by_address_.find(a);
    return it == by_address_.end() ? a.encoded() : parties_[it->second].name;
}

void PlasmaWorld::commit_latest() {
    root_.submit_block(chain_.operator_address(), chain_.blocks().back().merkle_root);
}

std::vector<std::string> PlasmaWorld::state_lines() const {
    std::vector<std::string> out;
    for (const auto& n : chain_.numbered()) {
        std::string prefix;
        if (chain_.is_spent(n.outpoint))
            prefix = "spent: ";
        else if (!chain_.utxos().contains(n.outpoint))
            prefix = "exited: ";
        out.push_back(prefix + "UTXO " + std::to_string(n.number) + ": " + (n.sender ? name_of(*n.sender) : "∅") +
                      " → " + name_of(n.output.recipient) + ": " + format_coin(n.output.amount));
    }
    return out;
}

std::map<std::string, Amount> PlasmaWorld::plasma_balances() const {
    std::map<std::string, Amount> out;
    for (const auto& p : parties_) {
        const auto b = ledger::balance_of(p.address, chain_.utxos());
        if (p.honest || b != 0) out[p.name] = b;
    }
    return out;
}

std::map<std::string, Amount> PlasmaWorld::layer1_balances() const {
    std::map<std::string, Amount> out;
    for (const auto& p : parties_) out[p.name] = root_.layer1_balance(p.address);
    return out;
}

bool PlasmaWorld::conserved() const {
    if (root_.locked_balance() != root_.total_deposited() - root_.total_paid_out()) return false;
    if (fraud_committed_) return true;
    return root_.locked_balance() >= chain_.circulating() - root_.pending_amount();
}

void PlasmaWorld::record(std::string action, std::vector<std::string> events) {
    TranscriptStep s;
    s.index = static_cast<int>(transcript_.steps.size()) + 1;
    s.action = std::move(action);
    s.events = std::move(events);
    s.state = state_lines();
    s.plasma_balances = plasma_balances();
    s.layer1_balances = layer1_balances();
    transcript_.steps.push_back(std::move(s));
}

void PlasmaWorld::fund(const std::string& user, Amount amount) {
    const auto& p = ensure(user);
    std::vector<std::string> ev;
    try {
        root_.fund(p.address, amount);
        ev.push_back(user + " receives " + format_coin(amount) + " on layer 1");
    } catch (const DomainError& e) {
        ev.push_back(err_text(e));
    }
    record("fund " + user + " " + format_coin(amount), std::move(ev));
}

void PlasmaWorld::deposit(const std::string& user, Amount amount) {
    const auto& p = ensure(user);
    std::vector<std::string> ev;
    try {
        const auto d = root_.deposit(p.address, amount);
        chain_.apply_deposit(d);
        commit_latest();
        ev.push_back("deposit #" + std::to_string(d.id) + " locks " + format_coin(amount));
        ev.push_back("operator mints UTXO " + std::to_string(chain_.numbered().size()) + " in block " +
                     std::to_string(chain_.blocks().back().number));
    } catch (const DomainError& e) {
        ev.push_back(err_text(e));
    }
    record(user + " deposits " + format_coin(amount), std::move(ev));
}

void PlasmaWorld::transfer(const std::string& from, const std::string& to, Amount amount) {
    const auto& sender = ensure(from);
    const auto& receiver = ensure(to);
    std::vector<std::string> ev;
    try {
        chain_.submit(plasma_transfer(sender.key, receiver.address, amount, chain_.utxos()));
        const auto& b = chain_.seal_block();
        commit_latest();
        ev.push_back("block " + std::to_string(b.number) + " committed, root " + b.merkle_root.hex());
    } catch (const DomainError& e) {
        ev.push_back(err_text(e));
    }
    record(from + " transfers " + format_coin(amount) + " to " + to, std::move(ev));
}

std::uint64_t PlasmaWorld::withdraw(const std::string& user, int utxo_number) {
    const auto& p = ensure(user);
    std::vector<std::string> ev;
    std::uint64_t id = 0;
    try {
        const auto& out = chain_.by_number(utxo_number);
        id = root_.request_withdrawal(p.address, chain_.prove(out.position), out.output.amount, config_.root.bond);
        ev.push_back("withdrawal #" + std::to_string(id) + " pending until day " +
                     std::to_string(root_.withdrawal(id).deadline));
    } catch (const DomainError& e) {
        ev.push_back(err_text(e));
    }
    record(user + " requests withdrawal of UTXO " + std::to_string(utxo_number), std::move(ev));
    return id;
}

void PlasmaWorld::challenge(const std::string& user, std::uint64_t withdrawal_id) {
    const auto& p = ensure(user);
    std::vector<std::string> ev;
    try {
        const auto& w = root_.withdrawal(withdrawal_id);
        const ledger::OutPoint op{w.txid, w.position.output};
        Position pos;
        if (auto s = chain_.spender_of(op)) {
            pos = *s;
        } else {
            // Nothing spends it; the best available evidence is the newest tx.
            pos = {chain_.blocks().back().number, 0, 0};
        }
        root_.challenge(p.address, withdrawal_id, chain_.prove(pos));
        ev.push_back("withdrawal #" + std::to_string(withdrawal_id) + " reverted, bond " +
                     format_coin(root_.withdrawal(withdrawal_id).bond) + " to " + user);
    } catch (const DomainError& e) {
        ev.push_back(err_text(e));
    }
    record(user + " challenges withdrawal #" + std::to_string(withdrawal_id), std::move(ev));
}

void PlasmaWorld::advance(std::uint64_t days) {
    root_.advance_time(days);
    record("advance " + std::to_string(days) + " days", {"day " + std::to_string(root_.now())});
}

void PlasmaWorld::finalize() {
    std::vector<std::string> ev;
    for (const auto& pay : root_.finalize_withdrawals()) {
        const auto& w = root_.withdrawal(pay.withdrawal_id);
        chain_.remove_exited({w.txid, w.position.output});
        ev.push_back("withdrawal #" + std::to_string(pay.withdrawal_id) + " pays " + format_coin(pay.amount) + " to " +
                     name_of(pay.to) + ", bond " + format_coin(pay.bond_returned) + " returned");
    }
    if (ev.empty()) ev.push_back("nothing to finalize");
    record("finalize withdrawals", std::move(ev));
}

void PlasmaWorld::commit_fraud(Amount amount) {
    fraud_committed_ = true;
    const auto& op = parties_.front();
    std::vector<std::string> ev;
    try {
        ledger::UtxoTransaction mint;
        mint.outputs.push_back({amount, op.address});
        mint.coinbase_height = 1'000'000 + chain_.blocks().size();
        chain_.seal_unchecked({mint});
        commit_latest();
        ev.push_back("operator commits block " + std::to_string(chain_.blocks().back().number) + " minting " +
                     format_coin(amount) + " without a deposit");
        const auto& n = chain_.numbered().back();
        const auto id = root_.request_withdrawal(op.address, chain_.prove(n.position), amount, config_.root.bond);
        ev.push_back("operator requests withdrawal #" + std::to_string(id));
    } catch (const DomainError& e) {
        ev.push_back(err_text(e));
    }
    record("operator commits a fraudulent block", std::move(ev));
}

void PlasmaWorld::watch() {
    std::vector<std::string> ev;
    ledger::UtxoSet state;
    std::optional<Position> bad;
    for (const auto& b : chain_.blocks()) {
        for (std::uint32_t t = 0; !bad && t < b.txs.size(); ++t) {
            const auto& tx = b.txs[t];
            bool ok;
            if (tx.is_coinbase()) {
                const auto id = tx.coinbase_height;
                const auto& deps = root_.deposits();
                ok = id >= 1 && id <= deps.size() && tx.outputs.size() == 1 &&
                     tx.outputs[0] == ledger::TxOutput{deps[id - 1].amount, deps[id - 1].user};
            } else {
                ok = !ledger::validate_tx(tx, state).has_value();
            }
            if (ok)
                ledger::apply_unchecked(tx, state);
            else
                bad = Position{b.number, t, 0};
        }
        if (bad) break;
    }
    if (!bad) {
        record("watchers replay the child chain", {"all committed blocks valid"});
        return;
    }
    ev.push_back("invalid transaction at " + bad->str());

    const Party* filer = nullptr;
    for (const auto& p : parties_)
        if (p.honest) {
            filer = &p;
            break;
        }
    if (filer && !root_.headers()[bad->block].fraudulent) {
        try {
            const auto proof = chain_.prove(*bad);
            std::vector<InclusionProof> sources;
            for (const auto& in : proof.tx.inputs) {
                auto pos = chain_.position_of(in.outpoint);
                if (!pos) throw PlasmaError(PlasmaErrc::ProofMismatch, "input origin unavailable");
                sources.push_back(chain_.prove(*pos));
            }
            const auto reverted = root_.prove_invalid_block(filer->address, proof, sources);
            ev.push_back(filer->name + " proves block " + std::to_string(bad->block) + " fraudulent, reverting " +
                         std::to_string(reverted.size()) + " withdrawal(s)");
        } catch (const DomainError& e) {
            ev.push_back(err_text(e));
        }
    }

    // Exit everything honest parties own in the last valid state.
    for (const auto& [id, w] : root_.withdrawals())
        if (w.status == WithdrawalStatus::Finalized) state.erase({w.txid, w.position.output});
    for (const auto& p : parties_) {
        if (!p.honest) continue;
        for (const auto& [op, out] : state.owned_by(p.address)) {
            const auto pos = chain_.position_of(op);
            bool open = false;
            for (const auto& [id, w] : root_.withdrawals())
                open = open || (w.position == *pos && w.status != WithdrawalStatus::Reverted);
            if (open) continue;
            try {
                const auto id = root_.request_withdrawal(p.address, chain_.prove(*pos), out.amount, config_.root.bond);
                ev.push_back(p.name + " exits " + format_coin(out.amount) + " as withdrawal #" + std::to_string(id));
            } catch (const DomainError& e) {
                ev.push_back(err_text(e));
            }
        }
    }
    record("watchers replay the child chain", std::move(ev));
}

void PlasmaWorld::checkpoint(const std::string& label) {
    std::vector<std::string> ev;
    for (const auto& [name, amount] : plasma_balances()) ev.push_back(name + " has " + format_coin(amount));
    record(label, std::move(ev));
}

Transcript run_three_party_example(const ScenarioConfig& config) {
    PlasmaWorld w(config);
    const Amount c = ledger::kCoin;
    w.deposit("Alice", 10 * c);
    w.transfer("Alice", "Bob", 5 * c);
    w.transfer("Bob", "Charlie", 3 * c);
    w.transfer("Charlie", "Alice", 2 * c);
    w.checkpoint("balances on the child chain");
    w.withdraw("Bob", 4);
    w.advance(config.root.dispute_period);
    w.finalize();
    const auto alice = w.withdraw("Alice", 3);
    w.challenge("Charlie", alice);
    w.advance(config.root.dispute_period);
    w.finalize();
    return w.transcript();
}

namespace {

[[noreturn]] void bad_script(const std::string& msg) { throw DomainError("BadScript", msg); }

void only(const json& a, std::initializer_list<std::string_view> keys) {
    for (const auto& [k, _] : a.items()) {
        bool ok = false;
        for (auto key : keys) ok = ok || k == key;
        if (!ok) bad_script("unknown key '" + k + "'");
    }
    for (auto key : keys)
        if (!a.contains(std::string(key))) bad_script("missing key '" + std::string(key) + "'");
}

Amount coins(const json& v) {
    if (!v.is_number()) bad_script("amounts must be numbers");
    const double x = v.get<double>();
    if (!std::isfinite(x) || std::abs(x) > 21e6) bad_script("amount out of range");
    return static_cast<Amount>(std::llround(x * static_cast<double>(ledger::kCoin)));
}

std::string text(const json& v) {
    if (!v.is_string()) bad_script("names must be strings");
    return v.get<std::string>();
}

std::uint64_t count(const json& v) {
    if (!v.is_number_unsigned()) bad_script("counts must be non-negative integers");
    return v.get<std::uint64_t>();
}

} // namespace

Transcript run_script(std::string_view json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& e) {
        bad_script(std::string("malformed JSON: ") + e.what());
    }
    ScenarioConfig cfg;
    json actions = doc;
    if (doc.is_object()) {
        for (const auto& [k, _] : doc.items())
            if (k != "config" && k != "actions") bad_script("unknown key '" + k + "'");
        if (!doc.contains("actions")) bad_script("missing 'actions'");
        actions = doc["actions"];
        if (doc.contains("config")) {
            const auto& c = doc["config"];
            if (!c.is_object()) bad_script("'config' must be an object");
            for (const auto& [k, v] : c.items()) {
                if (k == "dispute_period")
                    cfg.root.dispute_period = count(v);
                else if (k == "bond")
                    cfg.root.bond = coins(v);
                else if (k == "initial_layer1")
                    cfg.initial_layer1 = coins(v);
                else
                    bad_script("unknown config key '" + k + "'");
            }
        }
    }
    if (!actions.is_array()) bad_script("actions must be a list");

    PlasmaWorld w(cfg);
    for (const auto& a : actions) {
        if (!a.is_object() || !a.contains("action")) bad_script("each action needs an 'action' field");
        const auto kind = text(a["action"]);
        if (kind == "deposit") {
            only(a, {"action", "user", "amount"});
            w.deposit(text(a["user"]), coins(a["amount"]));
        } else if (kind == "transfer") {
            only(a, {"action", "from", "to", "amount"});
            w.transfer(text(a["from"]), text(a["to"]), coins(a["amount"]));
        } else if (kind == "withdraw") {
            only(a, {"action", "user", "utxo"});
            w.withdraw(text(a["user"]), static_cast<int>(count(a["utxo"])));
        } else if (kind == "challenge") {
            only(a, {"action", "user", "withdrawal"});
            w.challenge(text(a["user"]), count(a["withdrawal"]));
        } else if (kind == "advance") {
            only(a, {"action", "days"});
            w.advance(count(a["days"]));
        } else if (kind == "finalize") {
            only(a, {"action"});
            w.finalize();
        } else if (kind == "fund") {
            only(a, {"action", "user", "amount"});
            w.fund(text(a["user"]), coins(a["amount"]));
        } else if (kind == "fraud") {
            only(a, {"action", "amount"});
            w.commit_fraud(coins(a["amount"]));
        } else if (kind == "watch") {
            only(a, {"action"});
            w.watch();
        } else if (kind == "balances") {
            only(a, {"action"});
            w.checkpoint("balances on the child chain");
        } else {
            bad_script("unknown action '" + kind + "'");
        }
    }
    return w.transcript();
}

FraudOutcome run_fraud_scenario(const ScenarioConfig& config) {
    PlasmaWorld w(config);
    const Amount c = ledger::kCoin;
    w.deposit("Alice", 10 * c);
    w.deposit("Bob", 5 * c);
    w.transfer("Alice", "Bob", 3 * c);
    FraudOutcome out;
    out.entitled = w.plasma_balances();
    w.commit_fraud(1000 * c);
    w.watch();
    w.advance(config.root.dispute_period);
    w.finalize();
    for (const auto& [name, amount] : out.entitled) out.recovered[name] = 0;
    for (const auto& [id, wd] : w.root().withdrawals()) {
        if (wd.status != WithdrawalStatus::Finalized) continue;
        const auto name = w.name_of(wd.recipient);
        if (wd.recipient == w.root().operator_address())
            out.fraudulent_exit_paid = true;
        else
            out.recovered[name] += wd.amount;
    }
    out.transcript = w.transcript();
    return out;
}

} // namespace bcw::plasma
