#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/ledger/transaction.hpp"

namespace bcw::ledger {

enum class LedgerErrc {
    MissingInput,
    DuplicateInput,
    BadSignature,
    InsufficientFunds,
    NoOutputs,
    BadAmount,
    NothingToConsolidate,
    MissingCosigner,
};

constexpr std::string_view to_string(LedgerErrc c) {
    switch (c) {
    case LedgerErrc::MissingInput: return "MissingInput";
    case LedgerErrc::DuplicateInput: return "DuplicateInput";
    case LedgerErrc::BadSignature: return "BadSignature";
    case LedgerErrc::InsufficientFunds: return "InsufficientFunds";
    case LedgerErrc::NoOutputs: return "NoOutputs";
    case LedgerErrc::BadAmount: return "BadAmount";
    case LedgerErrc::NothingToConsolidate: return "NothingToConsolidate";
    case LedgerErrc::MissingCosigner: return "MissingCosigner";
    }
    return "LedgerError";
}

using LedgerError = CodedError<LedgerErrc>;

/// Validation failure; input_index is set when a specific input is at fault.
struct TxError {
    LedgerErrc code;
    std::optional<std::size_t> input_index;
    std::string message;

    std::string describe() const;
};

/// Map OutPoint -> TxOutput of every unspent output. A plain value: copies are
/// independent snapshots.
class UtxoSet {
public:
    using Map = std::map<OutPoint, TxOutput>;

    bool contains(const OutPoint& op) const { return entries_.contains(op); }
    const TxOutput* find(const OutPoint& op) const;
    std::size_t size() const { return entries_.size(); }
    const Map& entries() const { return entries_; }

    void insert(const OutPoint& op, const TxOutput& out);
    void erase(const OutPoint& op);

    Amount total_value() const;
    /// Unspent outputs paying `addr`, in OutPoint order.
    std::vector<std::pair<OutPoint, TxOutput>> owned_by(const crypto::Address& addr) const;

    bool operator==(const UtxoSet&) const = default;

private:
    Map entries_;
};

/// Checks inputs exist, are distinct, are owned by the presented key, carry
/// valid signatures, and cover the outputs. Coinbases only get the output
/// checks; their amount is policed by block validation. Never mutates state.
std::optional<TxError> validate_tx(const UtxoTransaction& tx, const UtxoSet& state,
                                   const crypto::CurveParams& curve = *crypto::secp256k1());

/// Throws LedgerError if the transaction does not validate.
UtxoSet apply_tx(const UtxoTransaction& tx, const UtxoSet& state,
                 const crypto::CurveParams& curve = *crypto::secp256k1());

/// Applies without re-validating. For callers that have validated already.
void apply_unchecked(const UtxoTransaction& tx, UtxoSet& state);

/// Sum(inputs) - Sum(outputs); 0 for coinbases. Throws LedgerError(MissingInput).
Amount tx_fee(const UtxoTransaction& tx, const UtxoSet& state);

/// Fee divided by serialized size in bytes.
double fee_rate(const UtxoTransaction& tx, const UtxoSet& state);

Amount balance_of(const crypto::Address& addr, const UtxoSet& state);

/// 50 coins halving every 210,000 blocks.
inline constexpr std::uint64_t kHalvingInterval = 210'000;
Amount block_subsidy(std::uint64_t height);

} // namespace bcw::ledger
