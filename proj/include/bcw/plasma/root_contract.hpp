#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/crypto/merkle.hpp"
#include "bcw/ledger/transaction.hpp"

namespace bcw::plasma {

using ledger::Amount;
using crypto::Address;

enum class PlasmaErrc {
    UnauthorizedCommitter,
    InsufficientLayer1Funds,
    BadAmount,
    UnknownBlock,
    BadProof,
    InsufficientBond,
    DuplicateExit,
    UnknownWithdrawal,
    NotPending,
    WindowClosed,
    ProofMismatch,
    FraudulentBlock,
    InvalidTransaction,
};

constexpr std::string_view to_string(PlasmaErrc c) {
    switch (c) {
    case PlasmaErrc::UnauthorizedCommitter: return "UnauthorizedCommitter";
    case PlasmaErrc::InsufficientLayer1Funds: return "InsufficientLayer1Funds";
    case PlasmaErrc::BadAmount: return "BadAmount";
    case PlasmaErrc::UnknownBlock: return "UnknownBlock";
    case PlasmaErrc::BadProof: return "BadProof";
    case PlasmaErrc::InsufficientBond: return "InsufficientBond";
    case PlasmaErrc::DuplicateExit: return "DuplicateExit";
    case PlasmaErrc::UnknownWithdrawal: return "UnknownWithdrawal";
    case PlasmaErrc::NotPending: return "NotPending";
    case PlasmaErrc::WindowClosed: return "WindowClosed";
    case PlasmaErrc::ProofMismatch: return "ProofMismatch";
    case PlasmaErrc::FraudulentBlock: return "FraudulentBlock";
    case PlasmaErrc::InvalidTransaction: return "InvalidTransaction";
    }
    return "PlasmaError";
}

using PlasmaError = CodedError<PlasmaErrc>;

/// Where an output lives on the child chain.
struct Position {
    std::uint64_t block = 0;
    std::uint32_t tx = 0;
    std::uint32_t output = 0;

    auto operator<=>(const Position&) const = default;
    std::string str() const;
};

/// A transaction plus the Merkle path placing it in a committed block.
/// For exits, position.output names the output being withdrawn.
struct InclusionProof {
    Position position;
    ledger::UtxoTransaction tx;
    crypto::MerkleProof proof;
};

struct CommittedHeader {
    HashDigest merkle_root;
    std::uint64_t commit_time = 0;
    /// Set once a fraud proof against the block has been accepted.
    bool fraudulent = false;
};

struct DepositRecord {
    std::uint64_t id = 0;
    Address user;
    Amount amount = 0;
    std::uint64_t time = 0;
};

enum class WithdrawalStatus { Pending, Finalized, Reverted };
std::string_view to_string(WithdrawalStatus s);

struct WithdrawalRequest {
    std::uint64_t id = 0;
    Address requester;
    Position position;
    Amount amount = 0;
    /// Owner of the exited output; payouts go here whoever asked.
    Address recipient;
    HashDigest txid;
    crypto::MerkleProof merkle_proof;
    std::uint64_t submitted_at = 0;
    std::uint64_t deadline = 0;
    Amount bond = 0;
    WithdrawalStatus status = WithdrawalStatus::Pending;
    std::optional<Address> challenger;
};

struct Payout {
    std::uint64_t withdrawal_id = 0;
    Address to;
    Amount amount = 0;
    Amount bond_returned = 0;
};

struct RootConfig {
    /// Rounds (days) a withdrawal stays open to challenges.
    std::uint64_t dispute_period = 7;
    Amount bond = ledger::kCoin / 10;
};

/// Layer-1 contract anchoring the child chain. Holds plain layer-1 account
/// balances so deposits, bonds and payouts are all accounted for.
class RootContract {
public:
    RootContract(Address operator_address, RootConfig config = {});

    const RootConfig& config() const { return config_; }
    const Address& operator_address() const { return operator_; }

    std::uint64_t now() const { return now_; }
    void advance_time(std::uint64_t dt) { now_ += dt; }

    /// Credits a layer-1 account (genesis allocation in scenarios).
    void fund(const Address& user, Amount amount);
    Amount layer1_balance(const Address& user) const;

    /// Appends (root, now). The contract cannot judge the block, so repeats
    /// are appended too. Throws PlasmaError(UnauthorizedCommitter).
    std::size_t submit_block(const Address& caller, const HashDigest& merkle_root);

    /// Locks layer-1 funds; the operator mints the matching child UTXO.
    /// Throws PlasmaError(BadAmount / InsufficientLayer1Funds).
    DepositRecord deposit(const Address& user, Amount amount);

    /// Opens a withdrawal of exit.position's output. Throws PlasmaError
    /// (UnknownBlock / BadProof / BadAmount / InsufficientBond /
    /// InsufficientLayer1Funds / DuplicateExit / FraudulentBlock).
    std::uint64_t request_withdrawal(const Address& requester, const InclusionProof& exit, Amount amount,
                                     Amount bond);

    /// Spend challenge: `spend` must be a committed transaction consuming the
    /// withdrawn output, signed by its owner. Reverts the withdrawal and pays
    /// the bond to the challenger. Throws PlasmaError(UnknownWithdrawal /
    /// NotPending / WindowClosed / ProofMismatch).
    void challenge(const Address& challenger, std::uint64_t withdrawal_id, const InclusionProof& spend);

    /// Invalid-block fraud proof: `bad` is a committed transaction that mints
    /// without a deposit, spends outputs it cannot sign for, or creates value.
    /// `sources` prove every input's origin. Marks the block fraudulent and
    /// reverts pending withdrawals from it or later blocks; their bonds go to
    /// the challenger. Throws PlasmaError(ProofMismatch) when nothing is wrong.
    std::vector<std::uint64_t> prove_invalid_block(const Address& challenger, const InclusionProof& bad,
                                                   const std::vector<InclusionProof>& sources);

    /// Pays out, in request order, every pending withdrawal whose window has
    /// closed. Stops at the first one the locked balance cannot cover.
    std::vector<Payout> finalize_withdrawals();

    const std::vector<CommittedHeader>& headers() const { return headers_; }
    const std::vector<DepositRecord>& deposits() const { return deposits_; }
    const std::map<std::uint64_t, WithdrawalRequest>& withdrawals() const { return withdrawals_; }
    const WithdrawalRequest& withdrawal(std::uint64_t id) const;

    /// Layer-1 value held for the child chain.
    Amount locked_balance() const { return locked_; }
    Amount bond_escrow() const { return escrow_; }
    Amount total_deposited() const { return deposited_; }
    Amount total_paid_out() const { return paid_out_; }
    Amount pending_amount() const;
    std::optional<std::uint64_t> first_fraudulent_block() const { return fraud_from_; }

private:
    const CommittedHeader& header_at(std::uint64_t block) const;
    bool included(const InclusionProof& p) const;
    std::optional<std::string> find_fraud(const InclusionProof& bad, const std::vector<InclusionProof>& sources) const;

    Address operator_;
    RootConfig config_;
    std::uint64_t now_ = 0;
    std::map<Address, Amount> layer1_;
    std::vector<CommittedHeader> headers_;
    std::vector<DepositRecord> deposits_;
    std::map<std::uint64_t, WithdrawalRequest> withdrawals_;
    std::uint64_t next_withdrawal_ = 1;
    Amount locked_ = 0;
    Amount escrow_ = 0;
    Amount deposited_ = 0;
    Amount paid_out_ = 0;
    std::optional<std::uint64_t> fraud_from_;
};

} // namespace bcw::plasma
