#include "bcw/ledger/utxo.hpp"

#include <set>

namespace bcw::ledger {

namespace {

TxError err(LedgerErrc code, std::optional<std::size_t> idx, std::string msg) {
    return {code, idx, std::move(msg)};
}

bool add_checked(Amount& acc, Amount v) {
    if (v < 0 || v > kMaxMoney) return false;
    acc += v;
    return acc <= kMaxMoney;
}

} // namespace

std::string TxError::describe() const {
    std::string s(to_string(code));
    if (input_index) s += " (input " + std::to_string(*input_index) + ")";
    if (!message.empty()) s += ": " + message;
    return s;
}

const TxOutput* UtxoSet::find(const OutPoint& op) const {
    auto it = entries_.find(op);
    return it == entries_.end() ? nullptr : &it->second;
}

void UtxoSet::insert(const OutPoint& op, const TxOutput& out) { entries_.insert_or_assign(op, out); }

void UtxoSet::erase(const OutPoint& op) { entries_.erase(op); }

Amount UtxoSet::total_value() const {
    Amount total = 0;
    for (const auto& [op, out] : entries_) total += out.amount;
    return total;
}

std::vector<std::pair<OutPoint, TxOutput>> UtxoSet::owned_by(const crypto::Address& addr) const {
    std::vector<std::pair<OutPoint, TxOutput>> out;
    for (const auto& [op, o] : entries_)
        if (o.recipient == addr) out.emplace_back(op, o);
    return out;
}

std::optional<TxError> validate_tx(const UtxoTransaction& tx, const UtxoSet& state,
                                   const crypto::CurveParams& curve) {
    if (tx.outputs.empty()) return err(LedgerErrc::NoOutputs, std::nullopt, "transaction has no outputs");
    Amount out_total = 0;
    for (std::size_t i = 0; i < tx.outputs.size(); ++i) {
        const Amount a = tx.outputs[i].amount;
        // Coinbases may carry a zero reward once the subsidy has run out.
        if (a < 0 || (a == 0 && !tx.is_coinbase()) || !add_checked(out_total, a))
            return err(LedgerErrc::BadAmount, std::nullopt, "output " + std::to_string(i) + " has invalid amount");
    }
    if (tx.is_coinbase()) return std::nullopt;

    std::set<OutPoint> seen;
    Amount in_total = 0;
    const HashDigest digest = signing_digest(tx);
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const auto& in = tx.inputs[i];
        if (!seen.insert(in.outpoint).second)
            return err(LedgerErrc::DuplicateInput, i, in.outpoint.str() + " spent twice");
        const TxOutput* prev = state.find(in.outpoint);
        if (!prev) return err(LedgerErrc::MissingInput, i, in.outpoint.str() + " is not unspent");
        if (in.pubkey.infinity || !curve.on_curve(in.pubkey))
            return err(LedgerErrc::BadSignature, i, "public key not on curve");
        if (crypto::derive_address(in.pubkey, curve) != prev->recipient)
            return err(LedgerErrc::BadSignature, i, "public key does not own the output");
        if (!crypto::verify(curve, in.pubkey, digest.view(), in.signature))
            return err(LedgerErrc::BadSignature, i, "signature does not verify");
        if (!add_checked(in_total, prev->amount))
            return err(LedgerErrc::BadAmount, i, "input sum overflows");
    }
    if (in_total < out_total)
        return err(LedgerErrc::InsufficientFunds, std::nullopt,
                   "inputs " + std::to_string(in_total) + " < outputs " + std::to_string(out_total));
    return std::nullopt;
}

void apply_unchecked(const UtxoTransaction& tx, UtxoSet& state) {
    for (const auto& in : tx.inputs) state.erase(in.outpoint);
    const HashDigest id = txid(tx);
    for (std::size_t i = 0; i < tx.outputs.size(); ++i)
        state.insert({id, static_cast<std::uint32_t>(i)}, tx.outputs[i]);
}

UtxoSet apply_tx(const UtxoTransaction& tx, const UtxoSet& state, const crypto::CurveParams& curve) {
    if (auto e = validate_tx(tx, state, curve)) throw LedgerError(e->code, e->describe());
    UtxoSet next = state;
    apply_unchecked(tx, next);
    return next;
}

Amount tx_fee(const UtxoTransaction& tx, const UtxoSet& state) {
    if (tx.is_coinbase()) return 0;
    Amount in_total = 0;
    for (std::size_t i = 0; i < tx.inputs.size(); ++i) {
        const TxOutput* prev = state.find(tx.inputs[i].outpoint);
        if (!prev)
            throw LedgerError(LedgerErrc::MissingInput, "input " + std::to_string(i) + " " +
                                                            tx.inputs[i].outpoint.str() + " is not unspent");
        in_total += prev->amount;
    }
    return in_total - tx.total_out();
}

double fee_rate(const UtxoTransaction& tx, const UtxoSet& state) {
    return static_cast<double>(tx_fee(tx, state)) / static_cast<double>(serialize(tx).size());
}

Amount balance_of(const crypto::Address& addr, const UtxoSet& state) {
    Amount total = 0;
    for (const auto& [op, out] : state.entries())
        if (out.recipient == addr) total += out.amount;
    return total;
}

Amount block_subsidy(std::uint64_t height) {
    const std::uint64_t halvings = height / kHalvingInterval;
    if (halvings >= 63) return 0;
    return (50 * kCoin) >> halvings;
}

} // namespace bcw::ledger
