#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/account/programs.hpp"
#include "bcw/common/serialize.hpp"
#include "bcw/crypto/ecdsa.hpp"

namespace bcw::account {

/// A zero receiver means "create a contract"; data then carries CallData whose
/// function is the program id and whose args are the init arguments.
struct AccountTx {
    Address sender;
    Address receiver;
    Amount value = 0;
    Bytes data;
    std::uint64_t startgas = 0;
    std::uint64_t gasprice = 0;
    std::uint64_t nonce = 0;
    crypto::CurvePoint pubkey;
    crypto::Signature signature;

    bool is_create() const { return receiver.is_zero(); }
    bool operator==(const AccountTx&) const = default;
};

/// sender[20] | receiver[20] | i64 value | bytes data | u64 startgas | u64 gasprice
/// | u64 nonce | pubkey x | pubkey y | sig r | sig s
Bytes serialize(const AccountTx& tx);
AccountTx read_account_tx(Reader& r);
void write_account_tx(Writer& w, const AccountTx& tx);
HashDigest tx_hash(const AccountTx& tx);
HashDigest signing_digest(const AccountTx& tx);

/// Fills pubkey, sender and signature.
void sign_tx(AccountTx& tx, const crypto::KeyPair& key);

/// hash160(deployer || u64 nonce)
Address contract_address(const Address& deployer, std::uint64_t nonce);

enum class TransitionErrc { Malformed, InsufficientBalanceForFee };

constexpr std::string_view to_string(TransitionErrc c) {
    switch (c) {
    case TransitionErrc::Malformed: return "Malformed";
    case TransitionErrc::InsufficientBalanceForFee: return "InsufficientBalanceForFee";
    }
    return "TransitionError";
}

/// Steps 1 and 2 failures: the transaction cannot be included at all.
using TransitionError = CodedError<TransitionErrc>;

enum class ReceiptStatus : std::uint8_t { Success = 0, Failed = 1 };

struct Receipt {
    HashDigest tx_hash;
    ReceiptStatus status = ReceiptStatus::Success;
    std::string failure;  // IntrinsicGas, InsufficientValue, OutOfGas, Revert: ..., UnknownProgram
    std::uint64_t gas_used = 0;
    Amount fee_paid = 0;   // to the miner
    Amount refund = 0;     // back to the sender
    std::vector<Event> events;
    std::optional<Address> created;
    Bytes output;

    bool ok() const { return status == ReceiptStatus::Success; }
};

struct TransitionConfig {
    GasSchedule gas;
    const ProgramRegistry* registry = &ProgramRegistry::builtin();
    const crypto::CurveParams* curve = nullptr;  // secp256k1 when null
};

struct TransitionResult {
    WorldState state;
    Receipt receipt;
};

/// The six steps:
///  1. signature, sender/pubkey match, nonce and field sanity (else Malformed)
///  2. debit startgas * gasprice, bump nonce (else InsufficientBalanceForFee)
///  3. GAS = startgas - per_byte * |tx|; a negative GAS fails the execution
///  4. move value (creating the receiver) and run the contract handler
///  5. on any failure revert everything except the fee, which goes to the miner
///  6. refund unused GAS * gasprice to the sender, the rest to the miner
TransitionResult state_transition(const WorldState& state, const AccountTx& tx, const Address& miner,
                                  const TransitionConfig& cfg = {});

/// Builds and signs a creation transaction with the key's next nonce.
AccountTx make_deploy_tx(const WorldState& state, const crypto::KeyPair& key, const std::string& program_id,
                         const std::vector<Bytes>& init_args, std::uint64_t startgas, std::uint64_t gasprice);

/// Builds and signs a call or plain transfer with the key's next nonce.
AccountTx make_call_tx(const WorldState& state, const crypto::KeyPair& key, const Address& to, Amount value,
                       const CallData* call, std::uint64_t startgas, std::uint64_t gasprice);

Address account_address(const crypto::KeyPair& key);

/// Convenience: deploy through state_transition. Throws DomainError when the
/// deployment fails; returns the new state and contract address.
std::pair<WorldState, Address> deploy_contract(const WorldState& state, const crypto::KeyPair& deployer,
                                               const std::string& program_id, const std::vector<Bytes>& init_args,
                                               const Address& miner, std::uint64_t startgas = 100000,
                                               std::uint64_t gasprice = 0, const TransitionConfig& cfg = {});

} // namespace bcw::account
