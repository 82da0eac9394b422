#include "bcw/plasma/root_contract.hpp"

#include <set>

namespace bcw::plasma {

std::string Position::str() const {
    return "(" + std::to_string(block) + "," + std::to_string(tx) + "," + std::to_string(output) + ")";
}

std::string_view to_string(WithdrawalStatus s) {
    switch (s) {
    case WithdrawalStatus::Pending: return "pending";
    case WithdrawalStatus::Finalized: return "finalized";
    case WithdrawalStatus::Reverted: return "reverted";
    }
    return "pending";
}

RootContract::RootContract(Address operator_address, RootConfig config)
    : operator_(operator_address), config_(config) {}

void RootContract::fund(const Address& user, Amount amount) {
    if (amount <= 0) throw PlasmaError(PlasmaErrc::BadAmount, "funding must be positive");
    layer1_[user] += amount;
}

Amount RootContract::layer1_balance(const Address& user) const {
    auto it = layer1_.find(user);
    return it == layer1_.end() ? 0 : it->second;
}

std::size_t RootContract::submit_block(const Address& caller, const HashDigest& merkle_root) {
    if (caller != operator_)
        throw PlasmaError(PlasmaErrc::UnauthorizedCommitter, caller.encoded() + " is not the operator");
    headers_.push_back({merkle_root, now_, false});
    return headers_.size() - 1;
}

DepositRecord RootContract::deposit(const Address& user, Amount amount) {
    if (amount <= 0) throw PlasmaError(PlasmaErrc::BadAmount, "deposit must be positive");
    if (layer1_balance(user) < amount)
        throw PlasmaError(PlasmaErrc::InsufficientLayer1Funds, "layer-1 balance below deposit");
    layer1_[user] -= amount;
    locked_ += amount;
    deposited_ += amount;
    DepositRecord d{deposits_.size() + 1, user, amount, now_};
    deposits_.push_back(d);
    return d;
}

const CommittedHeader& RootContract::header_at(std::uint64_t block) const {
    if (block >= headers_.size())
        throw PlasmaError(PlasmaErrc::UnknownBlock, "no committed block " + std::to_string(block));
    return headers_[block];
}

bool RootContract::included(const InclusionProof& p) const {
    if (p.position.block >= headers_.size()) return false;
    return crypto::merkle_verify(headers_[p.position.block].merkle_root, ledger::serialize(p.tx),
                                 p.position.tx, p.proof);
}

std::uint64_t RootContract::request_withdrawal(const Address& requester, const InclusionProof& exit, Amount amount,
                                               Amount bond) {
    header_at(exit.position.block);
    if (fraud_from_ && exit.position.block >= *fraud_from_)
        throw PlasmaError(PlasmaErrc::FraudulentBlock, "block is at or after a proven fraudulent block");
    if (!included(exit)) throw PlasmaError(PlasmaErrc::BadProof, "Merkle proof does not match committed root");
    if (exit.position.output >= exit.tx.outputs.size())
        throw PlasmaError(PlasmaErrc::BadProof, "output index out of range");
    const auto& out = exit.tx.outputs[exit.position.output];
    if (amount != out.amount) throw PlasmaError(PlasmaErrc::BadAmount, "amount differs from the output");
    if (bond < config_.bond) throw PlasmaError(PlasmaErrc::InsufficientBond, "bond below required amount");
    if (layer1_balance(requester) < bond)
        throw PlasmaError(PlasmaErrc::InsufficientLayer1Funds, "cannot cover the bond");
    for (const auto& [id, w] : withdrawals_)
        if (w.position == exit.position && w.status != WithdrawalStatus::Reverted)
            throw PlasmaError(PlasmaErrc::DuplicateExit, "output already has withdrawal " + std::to_string(id));

    layer1_[requester] -= bond;
    escrow_ += bond;
    WithdrawalRequest w;
    w.id = next_withdrawal_++;
    w.requester = requester;
    w.position = exit.position;
    w.amount = amount;
    w.recipient = out.recipient;
    w.txid = ledger::txid(exit.tx);
    w.merkle_proof = exit.proof;
    w.submitted_at = now_;
    w.deadline = now_ + config_.dispute_period;
    w.bond = bond;
    withdrawals_[w.id] = w;
    return w.id;
}

const WithdrawalRequest& RootContract::withdrawal(std::uint64_t id) const {
    auto it = withdrawals_.find(id);
    if (it == withdrawals_.end()) throw PlasmaError(PlasmaErrc::UnknownWithdrawal, "no withdrawal " + std::to_string(id));
    return it->second;
}

void RootContract::challenge(const Address& challenger, std::uint64_t withdrawal_id, const InclusionProof& spend) {
    auto it = withdrawals_.find(withdrawal_id);
    if (it == withdrawals_.end())
        throw PlasmaError(PlasmaErrc::UnknownWithdrawal, "no withdrawal " + std::to_string(withdrawal_id));
    auto& w = it->second;
    if (w.status != WithdrawalStatus::Pending) throw PlasmaError(PlasmaErrc::NotPending, "withdrawal is not pending");
    if (now_ >= w.deadline) throw PlasmaError(PlasmaErrc::WindowClosed, "dispute period is over");
    if (spend.position.block >= headers_.size() || headers_[spend.position.block].fraudulent || !included(spend))
        throw PlasmaError(PlasmaErrc::ProofMismatch, "spend is not in a committed block");

    const ledger::OutPoint target{w.txid, w.position.output};
    const auto digest = ledger::signing_digest(spend.tx);
    const auto& curve = *crypto::secp256k1();
    bool spends = false;
    for (const auto& in : spend.tx.inputs) {
        if (in.outpoint != target) continue;
        // The owner's signature rules out spends made up by the operator.
        spends = crypto::derive_address(in.pubkey, curve) == w.recipient &&
                 crypto::verify(curve, in.pubkey, digest.view(), in.signature);
    }
    if (!spends) throw PlasmaError(PlasmaErrc::ProofMismatch, "transaction does not spend the withdrawn output");

    w.status = WithdrawalStatus::Reverted;
    w.challenger = challenger;
    escrow_ -= w.bond;
    layer1_[challenger] += w.bond;
}

std::optional<std::string> RootContract::find_fraud(const InclusionProof& bad,
                                                    const std::vector<InclusionProof>& sources) const {
    const auto& tx = bad.tx;
    if (tx.outputs.empty()) return "transaction has no outputs";
    for (const auto& o : tx.outputs)
        if (o.amount <= 0 || o.amount > ledger::kMaxMoney) return "output amount out of range";
    if (tx.is_coinbase()) {
        // Only deposits may mint; the deposit id rides in coinbase_height.
        const auto id = tx.coinbase_height;
        if (id == 0 || id > deposits_.size()) return "mint without a deposit";
        const auto& d = deposits_[id - 1];
        if (tx.outputs.size() != 1 || tx.outputs[0].amount != d.amount || tx.outputs[0].recipient != d.user)
            return "mint does not match deposit " + std::to_string(id);
        return std::nullopt;
    }
    if (sources.size() != tx.inputs.size())
        throw PlasmaError(PlasmaErrc::ProofMismatch, "a source proof is needed for every input");
    const auto& curve = *crypto::secp256k1();
    const auto digest = ledger::signing_digest(tx);
    std::set<ledger::OutPoint> seen;
    Amount in_total = 0;
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const auto& in = tx.inputs[i];
        const auto& src = sources[i];
        if (!included(src) || src.position.block > bad.position.block || ledger::txid(src.tx) != in.outpoint.txid)
            throw PlasmaError(PlasmaErrc::ProofMismatch, "source " + std::to_string(i) + " does not prove input origin");
        if (!seen.insert(in.outpoint).second) return "input spent twice";
        if (in.outpoint.index >= src.tx.outputs.size()) return "input refers to a missing output";
        const auto& prev = src.tx.outputs[in.outpoint.index];
        if (crypto::derive_address(in.pubkey, curve) != prev.recipient) return "input not owned by signer";
        if (!crypto::verify(curve, in.pubkey, digest.view(), in.signature)) return "bad signature";
        in_total += prev.amount;
    }
    if (tx.total_out() > in_total) return "outputs exceed inputs";
    return std::nullopt;
}

std::vector<std::uint64_t> RootContract::prove_invalid_block(const Address& challenger, const InclusionProof& bad,
                                                             const std::vector<InclusionProof>& sources) {
    header_at(bad.position.block);
    if (!included(bad)) throw PlasmaError(PlasmaErrc::ProofMismatch, "transaction is not in the committed block");
    const auto why = find_fraud(bad, sources);
    if (!why) throw PlasmaError(PlasmaErrc::ProofMismatch, "transaction is valid");

    const auto k = bad.position.block;
    headers_[k].fraudulent = true;
    fraud_from_ = fraud_from_ ? std::min(*fraud_from_, k) : k;
    std::vector<std::uint64_t> reverted;
    for (auto& [id, w] : withdrawals_) {
        if (w.status != WithdrawalStatus::Pending || w.position.block < *fraud_from_) continue;
        w.status = WithdrawalStatus::Reverted;
        w.challenger = challenger;
        escrow_ -= w.bond;
        layer1_[challenger] += w.bond;
        reverted.push_back(id);
    }
    return reverted;
}

std::vector<Payout> RootContract::finalize_withdrawals() {
    std::vector<Payout> out;
    for (auto& [id, w] : withdrawals_) {
        if (w.status != WithdrawalStatus::Pending) continue;
        if (now_ < w.deadline) continue;
        if (w.amount > locked_) break;  // FIFO: later exits wait behind this one
        w.status = WithdrawalStatus::Finalized;
        locked_ -= w.amount;
        paid_out_ += w.amount;
        escrow_ -= w.bond;
        layer1_[w.recipient] += w.amount;
        layer1_[w.requester] += w.bond;
        out.push_back({id, w.recipient, w.amount, w.bond});
    }
    return out;
}

Amount RootContract::pending_amount() const {
    Amount total = 0;
    for (const auto& [id, w] : withdrawals_)
        if (w.status == WithdrawalStatus::Pending) total += w.amount;
    return total;
}

} // namespace bcw::plasma
