#include "bcw/ledger/wallet.hpp"

#include <algorithm>

namespace bcw::ledger {

namespace {

void sign_all(UtxoTransaction& tx, const std::vector<const crypto::KeyPair*>& signers) {
    // Public keys are part of the signed digest, so set them all first.
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) tx.inputs[i].pubkey = signers[i]->pub;
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) sign_input(tx, i, *signers[i]);
}

} // namespace

crypto::Address address_of(const crypto::KeyPair& key) { return crypto::derive_address(key.pub, *key.curve); }

UtxoTransaction build_transfer(const crypto::KeyPair& key, const std::vector<Payment>& payments,
                               const UtxoSet& state, Amount fee) {
    if (payments.empty()) throw LedgerError(LedgerErrc::NoOutputs, "no payments");
    if (fee < 0) throw LedgerError(LedgerErrc::BadAmount, "negative fee");
    Amount need = fee;
    for (const auto& [addr, amount] : payments) {
        if (amount <= 0 || amount > kMaxMoney) throw LedgerError(LedgerErrc::BadAmount, "payment must be positive");
        need += amount;
    }

    const auto sender = address_of(key);
    auto owned = state.owned_by(sender);
    std::stable_sort(owned.begin(), owned.end(),
                     [](const auto& a, const auto& b) { return a.second.amount > b.second.amount; });

    UtxoTransaction tx;
    Amount gathered = 0;
    for (const auto& [op, out] : owned) {
        if (gathered >= need) break;
        tx.inputs.push_back({op, {}, {}});
        gathered += out.amount;
    }
    if (gathered < need)
        throw LedgerError(LedgerErrc::InsufficientFunds,
                          "balance " + std::to_string(balance_of(sender, state)) + " < " + std::to_string(need));

    for (const auto& [addr, amount] : payments) tx.outputs.push_back({amount, addr});
    if (gathered > need) tx.outputs.push_back({gathered - need, sender});

    std::vector<const crypto::KeyPair*> signers(tx.inputs.size(), &key);
    sign_all(tx, signers);
    return tx;
}

UtxoTransaction build_consolidation(const crypto::KeyPair& key, const UtxoSet& state, Amount fee) {
    const auto owner = address_of(key);
    auto owned = state.owned_by(owner);
    if (owned.size() < 2)
        throw LedgerError(LedgerErrc::NothingToConsolidate,
                          "address owns " + std::to_string(owned.size()) + " UTXO(s)");
    Amount total = 0;
    UtxoTransaction tx;
    for (const auto& [op, out] : owned) {
        tx.inputs.push_back({op, {}, {}});
        total += out.amount;
    }
    if (fee < 0 || fee >= total) throw LedgerError(LedgerErrc::InsufficientFunds, "fee exceeds consolidated value");
    tx.outputs.push_back({total - fee, owner});
    std::vector<const crypto::KeyPair*> signers(tx.inputs.size(), &key);
    sign_all(tx, signers);
    return tx;
}

UtxoTransaction build_joint_payment(const std::vector<crypto::KeyPair>& keys,
                                    const std::vector<OutPoint>& contributions,
                                    const crypto::Address& recipient, Amount amount, const UtxoSet& state) {
    if (contributions.empty()) throw LedgerError(LedgerErrc::MissingInput, "no contributions");
    if (amount <= 0) throw LedgerError(LedgerErrc::BadAmount, "payment must be positive");

    std::map<crypto::Address, const crypto::KeyPair*> by_address;
    for (const auto& k : keys) by_address.emplace(address_of(k), &k);

    UtxoTransaction tx;
    std::vector<const crypto::KeyPair*> signers;
    Amount total = 0;
    for (std::size_t i = 0; i < contributions.size(); ++i) {
        const TxOutput* prev = state.find(contributions[i]);
        if (!prev) throw LedgerError(LedgerErrc::MissingInput, contributions[i].str() + " is not unspent");
        auto it = by_address.find(prev->recipient);
        if (it == by_address.end())
            throw LedgerError(LedgerErrc::MissingCosigner,
                              "no key for owner " + prev->recipient.encoded() + " of input " + std::to_string(i));
        tx.inputs.push_back({contributions[i], {}, {}});
        signers.push_back(it->second);
        total += prev->amount;
    }
    if (total < amount)
        throw LedgerError(LedgerErrc::InsufficientFunds,
                          "contributions " + std::to_string(total) + " < " + std::to_string(amount));
    tx.outputs.push_back({amount, recipient});
    sign_all(tx, signers);
    return tx;
}

UtxoTransaction build_coinbase(const crypto::Address& miner, std::uint64_t height, Amount fees,
                               std::uint64_t coinbase_nonce) {
    if (fees < 0) throw LedgerError(LedgerErrc::BadAmount, "negative fees");
    UtxoTransaction tx;
    tx.outputs.push_back({block_subsidy(height) + fees, miner});
    tx.coinbase_height = height;
    tx.coinbase_nonce = coinbase_nonce;
    return tx;
}

Walkthrough replay_four_party_example() {
    Walkthrough w;
    for (const char* name : {"alice", "bob", "charlie", "dave"}) w.parties.emplace(name, crypto::keypair_from_label(name));
    const auto& alice = w.parties.at("alice");
    const auto& bob = w.parties.at("bob");
    auto addr = [&](const char* name) { return address_of(w.parties.at(name)); };

    int next_number = 1;
    auto record = [&](std::string label, UtxoTransaction tx) {
        WalkthroughStep step{std::move(label), std::move(tx), {}, {}};
        for (const auto& in : step.tx.inputs) {
            for (auto& [num, op] : w.numbered) {
                if (op == in.outpoint) {
                    step.spent.push_back(num);
                    w.spent[num] = true;
                }
            }
        }
        w.state = apply_tx(step.tx, w.state);
        const HashDigest id = txid(step.tx);
        for (std::size_t i = 0; i < step.tx.outputs.size(); ++i) {
            w.numbered[next_number] = {id, static_cast<std::uint32_t>(i)};
            w.spent[next_number] = false;
            step.created.push_back(next_number++);
        }
        w.steps.push_back(std::move(step));
    };

    UtxoTransaction tx1;
    tx1.outputs.push_back({25 * kCoin, addr("alice")});
    record("Tx1", tx1);
    record("Tx2", build_transfer(alice, {{addr("bob"), 17 * kCoin}}, w.state));
    record("Tx3", build_transfer(bob, {{addr("charlie"), 8 * kCoin}}, w.state));
    record("Tx4", build_transfer(alice, {{addr("dave"), 3 * kCoin}}, w.state));
    return w;
}

} // namespace bcw::ledger
