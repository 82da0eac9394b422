#include "bcw/plasma/plasma_chain.hpp"

#include <algorithm>

#include "bcw/chain/block.hpp"
#include "bcw/crypto/hash.hpp"
#include "bcw/ledger/wallet.hpp"

namespace bcw::plasma {

HashDigest block_signing_digest(std::uint64_t number, const HashDigest& root) {
    Writer w;
    w.u64(number);
    w.digest(root);
    return crypto::sha256d(w.data());
}

bool verify_block(const PlasmaBlock& b, const crypto::CurvePoint& operator_pub) {
    if (b.txs.empty() || chain::compute_merkle_root(b.txs) != b.merkle_root) return false;
    return crypto::verify(*crypto::secp256k1(), operator_pub, block_signing_digest(b.number, b.merkle_root).view(),
                          b.operator_sig);
}

ledger::UtxoTransaction plasma_transfer(const crypto::KeyPair& key, const Address& to, Amount amount,
                                        const ledger::UtxoSet& state) {
    // Reuse the wallet's coin selection and signing, then put change first.
    auto tx = ledger::build_transfer(key, {{to, amount}}, state);
    if (tx.outputs.size() == 1) return tx;
    std::rotate(tx.outputs.begin(), tx.outputs.begin() + 1, tx.outputs.end());
    for (auto& in : tx.inputs) in.signature = {};
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) ledger::sign_input(tx, i, key);
    return tx;
}

ledger::UtxoTransaction deposit_mint(const DepositRecord& d) {
    ledger::UtxoTransaction tx;
    tx.outputs.push_back({d.amount, d.user});
    tx.coinbase_height = d.id;
    return tx;
}

PlasmaChain::PlasmaChain(crypto::KeyPair operator_key) : operator_(std::move(operator_key)) {}

Address PlasmaChain::operator_address() const { return ledger::address_of(operator_); }

const PlasmaBlock& PlasmaChain::push_block(std::vector<ledger::UtxoTransaction> txs) {
    PlasmaBlock b;
    b.number = blocks_.size();
    b.merkle_root = chain::compute_merkle_root(txs);
    b.operator_sig = crypto::sign(operator_, block_signing_digest(b.number, b.merkle_root).view());
    for (std::uint32_t t = 0; t < txs.size(); ++t) {
        const auto& tx = txs[t];
        const auto id = ledger::txid(tx);
        for (const auto& in : tx.inputs) {
            spent_[in.outpoint] = Position{b.number, t, 0};
            utxos_.erase(in.outpoint);
        }
        std::optional<Address> sender;
        if (!tx.inputs.empty()) {
            if (auto it = index_.find(tx.inputs.front().outpoint); it != index_.end())
                sender = numbered_[it->second].output.recipient;
        }
        for (std::uint32_t o = 0; o < tx.outputs.size(); ++o) {
            const ledger::OutPoint op{id, o};
            utxos_.insert(op, tx.outputs[o]);
            index_[op] = numbered_.size();
            numbered_.push_back({static_cast<int>(numbered_.size()) + 1, op, {b.number, t, o}, sender, tx.outputs[o]});
        }
    }
    b.txs = std::move(txs);
    blocks_.push_back(std::move(b));
    pending_state_ = utxos_;
    return blocks_.back();
}

const PlasmaBlock& PlasmaChain::apply_deposit(const DepositRecord& d) {
    if (!pending_.empty()) seal_block();
    return push_block({deposit_mint(d)});
}

void PlasmaChain::submit(const ledger::UtxoTransaction& tx) {
    if (tx.is_coinbase()) throw PlasmaError(PlasmaErrc::InvalidTransaction, "only deposits may mint");
    if (pending_.empty()) pending_state_ = utxos_;
    if (auto e = ledger::validate_tx(tx, pending_state_))
        throw PlasmaError(PlasmaErrc::InvalidTransaction, e->describe());
    ledger::apply_unchecked(tx, pending_state_);
    pending_.push_back(tx);
}

const PlasmaBlock& PlasmaChain::seal_block() {
    if (pending_.empty()) throw PlasmaError(PlasmaErrc::InvalidTransaction, "nothing to seal");
    auto txs = std::move(pending_);
    pending_.clear();
    return push_block(std::move(txs));
}

const PlasmaBlock& PlasmaChain::seal_unchecked(std::vector<ledger::UtxoTransaction> txs) {
    if (txs.empty()) throw PlasmaError(PlasmaErrc::InvalidTransaction, "nothing to seal");
    return push_block(std::move(txs));
}

void PlasmaChain::remove_exited(const ledger::OutPoint& op) {
    utxos_.erase(op);
    pending_state_.erase(op);
}

const NumberedOutput& PlasmaChain::by_number(int number) const {
    if (number < 1 || static_cast<std::size_t>(number) > numbered_.size())
        throw PlasmaError(PlasmaErrc::UnknownBlock, "no UTXO " + std::to_string(number));
    return numbered_[static_cast<std::size_t>(number) - 1];
}

std::optional<Position> PlasmaChain::position_of(const ledger::OutPoint& op) const {
    auto it = index_.find(op);
    if (it == index_.end()) return std::nullopt;
    return numbered_[it->second].position;
}

std::optional<Position> PlasmaChain::spender_of(const ledger::OutPoint& op) const {
    auto it = spent_.find(op);
    if (it == spent_.end()) return std::nullopt;
    return it->second;
}

InclusionProof PlasmaChain::prove(const Position& pos) const {
    if (pos.block >= blocks_.size() || pos.tx >= blocks_[pos.block].txs.size())
        throw PlasmaError(PlasmaErrc::UnknownBlock, "no transaction at " + pos.str());
    const auto& b = blocks_[pos.block];
    std::vector<HashDigest> ids;
    for (const auto& tx : b.txs) ids.push_back(ledger::txid(tx));
    return {pos, b.txs[pos.tx], crypto::merkle_prove_from_hashes(ids, pos.tx)};
}

} // namespace bcw::plasma
