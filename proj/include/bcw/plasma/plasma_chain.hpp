#pragma once

#include <map>
#include <optional>
#include <vector>

#include "bcw/ledger/utxo.hpp"
#include "bcw/plasma/root_contract.hpp"

namespace bcw::plasma {

/// Child-chain block. Consensus is the operator's signature over
/// (u64 number | merkle_root); the root commits to txids in order.
struct PlasmaBlock {
    std::uint64_t number = 0;
    std::vector<ledger::UtxoTransaction> txs;
    HashDigest merkle_root;
    crypto::Signature operator_sig;
};

HashDigest block_signing_digest(std::uint64_t number, const HashDigest& root);
bool verify_block(const PlasmaBlock& b, const crypto::CurvePoint& operator_pub);

/// An output together with its creation-order number (1-based) and the
/// sender that created it, for listings in the UTXO 1..n style.
struct NumberedOutput {
    int number = 0;
    ledger::OutPoint outpoint;
    Position position;
    std::optional<Address> sender;
    ledger::TxOutput output;
};

/// Transfer with the change output first and the payment second.
/// Throws LedgerError(InsufficientFunds / BadAmount).
ledger::UtxoTransaction plasma_transfer(const crypto::KeyPair& key, const Address& to, Amount amount,
                                        const ledger::UtxoSet& state);

/// The mint that backs a deposit; the deposit id rides in coinbase_height.
ledger::UtxoTransaction deposit_mint(const DepositRecord& d);

class PlasmaChain {
public:
    explicit PlasmaChain(crypto::KeyPair operator_key);

    const crypto::KeyPair& operator_key() const { return operator_; }
    Address operator_address() const;

    /// Mints the deposit into its own block.
    const PlasmaBlock& apply_deposit(const DepositRecord& d);
    /// Queues a transaction after validating it against the current state
    /// plus everything already queued. Throws PlasmaError(InvalidTransaction).
    void submit(const ledger::UtxoTransaction& tx);
    /// Seals the queue into a signed block. Throws PlasmaError(InvalidTransaction)
    /// when nothing is queued.
    const PlasmaBlock& seal_block();
    /// Operator misbehaviour hook: seals transactions with no validation and
    /// applies them to the state as written.
    const PlasmaBlock& seal_unchecked(std::vector<ledger::UtxoTransaction> txs);
    /// Drops an output once its withdrawal has been paid on layer 1.
    void remove_exited(const ledger::OutPoint& op);

    const std::vector<PlasmaBlock>& blocks() const { return blocks_; }
    const ledger::UtxoSet& utxos() const { return utxos_; }
    Amount circulating() const { return utxos_.total_value(); }

    const std::vector<NumberedOutput>& numbered() const { return numbered_; }
    const NumberedOutput& by_number(int number) const;
    std::optional<Position> position_of(const ledger::OutPoint& op) const;
    bool is_spent(const ledger::OutPoint& op) const { return spent_.contains(op); }
    /// Position of the committed transaction spending `op`, if any.
    std::optional<Position> spender_of(const ledger::OutPoint& op) const;

    /// Inclusion proof for the transaction at `pos` (pos.output is carried along).
    InclusionProof prove(const Position& pos) const;

private:
    const PlasmaBlock& push_block(std::vector<ledger::UtxoTransaction> txs);

    crypto::KeyPair operator_;
    std::vector<PlasmaBlock> blocks_;
    std::vector<ledger::UtxoTransaction> pending_;
    ledger::UtxoSet utxos_;
    ledger::UtxoSet pending_state_;
    std::vector<NumberedOutput> numbered_;
    std::map<ledger::OutPoint, std::size_t> index_;
    std::map<ledger::OutPoint, Position> spent_;
};

} // namespace bcw::plasma
