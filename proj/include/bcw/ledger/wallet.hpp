#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "bcw/ledger/utxo.hpp"

namespace bcw::ledger {

using Payment = std::pair<crypto::Address, Amount>;

/// Selects the sender's UTXOs largest-first until amounts + fee are covered.
/// Outputs are the payments in order, then change to the sender when
/// positive. Throws LedgerError(InsufficientFunds / BadAmount).
UtxoTransaction build_transfer(const crypto::KeyPair& key, const std::vector<Payment>& payments,
                               const UtxoSet& state, Amount fee = 0);

/// Spends every UTXO of the key's address into one output back to itself.
/// Throws LedgerError(NothingToConsolidate) for fewer than two UTXOs.
UtxoTransaction build_consolidation(const crypto::KeyPair& key, const UtxoSet& state, Amount fee = 0);

/// Several payers co-fund one payment. Each contribution must be owned by one
/// of the keys, which signs it; anything above `amount` is left as fee.
/// Throws LedgerError(MissingCosigner / MissingInput / InsufficientFunds).
UtxoTransaction build_joint_payment(const std::vector<crypto::KeyPair>& keys,
                                    const std::vector<OutPoint>& contributions,
                                    const crypto::Address& recipient, Amount amount, const UtxoSet& state);

/// Zero inputs, one output of subsidy(height) + fees.
UtxoTransaction build_coinbase(const crypto::Address& miner, std::uint64_t height, Amount fees,
                               std::uint64_t coinbase_nonce);

crypto::Address address_of(const crypto::KeyPair& key);

/// The four-party walkthrough: Tx1 mints 25 to Alice, Tx2 Alice -> Bob 17
/// (change 8), Tx3 Bob -> Charlie 8 (change 9), Tx4 Alice -> Dave 3 (change 5).
/// UTXOs are numbered #1..#7 in creation order.
struct WalkthroughStep {
    std::string label;
    UtxoTransaction tx;
    std::vector<int> spent;    // UTXO numbers consumed
    std::vector<int> created;  // UTXO numbers produced
};

struct Walkthrough {
    std::map<std::string, crypto::KeyPair> parties;
    std::vector<WalkthroughStep> steps;
    std::map<int, OutPoint> numbered;
    std::map<int, bool> spent;
    UtxoSet state;
};

Walkthrough replay_four_party_example();

} // namespace bcw::ledger
