#pragma once

#include <deque>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/plasma/plasma_chain.hpp"

namespace bcw::plasma {

struct ScenarioConfig {
    RootConfig root;
    /// Layer-1 allocation each party gets on first mention.
    Amount initial_layer1 = 100 * ledger::kCoin;
};

/// "10", "0.1", "2.5": coin amounts without trailing zeros.
std::string format_coin(Amount a);

struct TranscriptStep {
    int index = 0;
    std::string action;
    std::vector<std::string> events;
    /// "UTXO n: sender → recipient: amount", prefixed "spent: " or "exited: ".
    std::vector<std::string> state;
    std::map<std::string, Amount> plasma_balances;
    std::map<std::string, Amount> layer1_balances;
};

struct Transcript {
    std::vector<TranscriptStep> steps;
    std::string to_json() const;
};

/// A root contract, its child chain, and named parties. Every public action
/// appends one transcript step; rejected actions are recorded, not thrown.
class PlasmaWorld {
public:
    struct Party {
        std::string name;
        crypto::KeyPair key;
        Address address;
        bool honest = true;
    };

    explicit PlasmaWorld(ScenarioConfig config = {});

    void fund(const std::string& user, Amount amount);
    void deposit(const std::string& user, Amount amount);
    void transfer(const std::string& from, const std::string& to, Amount amount);
    /// Returns the withdrawal id, or 0 when the contract rejected it.
    std::uint64_t withdraw(const std::string& user, int utxo_number);
    /// Looks for a committed spend of the withdrawn output; without one it
    /// submits the latest transaction, which the contract rejects.
    void challenge(const std::string& user, std::uint64_t withdrawal_id);
    void advance(std::uint64_t days);
    void finalize();
    /// The operator seals and commits a mint of `amount` to itself with no
    /// deposit behind it, then asks to withdraw it.
    void commit_fraud(Amount amount);
    /// Honest parties replay every committed block. On finding an invalid
    /// transaction one of them files the fraud proof and all of them exit
    /// their outputs from the last valid state.
    void watch();
    /// Records a step that only lists who holds what.
    void checkpoint(const std::string& label);

    const RootContract& root() const { return root_; }
    const PlasmaChain& chain() const { return chain_; }
    const Transcript& transcript() const { return transcript_; }
    const Party& party(const std::string& name);
    std::string name_of(const Address& a) const;

    std::vector<std::string> state_lines() const;
    std::map<std::string, Amount> plasma_balances() const;
    std::map<std::string, Amount> layer1_balances() const;

    /// Layer-1 value never falls short of what the child chain can claim.
    bool conserved() const;

private:
    Party& ensure(const std::string& name, bool honest = true);
    void commit_latest();
    void record(std::string action, std::vector<std::string> events);

    ScenarioConfig config_;
    std::deque<Party> parties_;  // stable references
    std::map<Address, std::size_t> by_address_;
    PlasmaChain chain_;
    RootContract root_;
    Transcript transcript_;
    bool fraud_committed_ = false;
};

/// The seven-step Alice/Bob/Charlie walkthrough, dispute period 7 days.
Transcript run_three_party_example(const ScenarioConfig& config = {});

/// Ordered JSON list of actions, or {"config": {...}, "actions": [...]}.
/// Throws DomainError("BadScript") on malformed input.
Transcript run_script(std::string_view json_text);

struct FraudOutcome {
    Transcript transcript;
    /// What each honest party held on the child chain before the fraud.
    std::map<std::string, Amount> entitled;
    /// What each honest party gained on layer 1, bonds excluded.
    std::map<std::string, Amount> recovered;
    bool fraudulent_exit_paid = false;
};

/// Operator mints itself 1000 coins and tries to exit them first.
FraudOutcome run_fraud_scenario(const ScenarioConfig& config = {});

} // namespace bcw::plasma
