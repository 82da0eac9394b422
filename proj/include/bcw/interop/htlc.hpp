#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/common/bytes.hpp"
#include "bcw/common/error.hpp"

namespace bcw::interop {

using Amount = std::int64_t;
using Party = std::string;

enum class InteropErrc {
    InsufficientFunds,
    BadAmount,
    PastExpiry,
    BadKey,
    Expired,
    AlreadyTerminal,
    NotYetExpired,
    UnknownContract,
    NotBeneficiary,
    UnsafeExpiries,
    InsufficientReserve,
    WrongMode,
    OperatorDown,
    BadScript,
};

constexpr std::string_view to_string(InteropErrc c) {
    switch (c) {
    case InteropErrc::InsufficientFunds: return "InsufficientFunds";
    case InteropErrc::BadAmount: return "BadAmount";
    case InteropErrc::PastExpiry: return "PastExpiry";
    case InteropErrc::BadKey: return "BadKey";
    case InteropErrc::Expired: return "Expired";
    case InteropErrc::AlreadyTerminal: return "AlreadyTerminal";
    case InteropErrc::NotYetExpired: return "NotYetExpired";
    case InteropErrc::UnknownContract: return "UnknownContract";
    case InteropErrc::NotBeneficiary: return "NotBeneficiary";
    case InteropErrc::UnsafeExpiries: return "UnsafeExpiries";
    case InteropErrc::InsufficientReserve: return "InsufficientReserve";
    case InteropErrc::WrongMode: return "WrongMode";
    case InteropErrc::OperatorDown: return "OperatorDown";
    case InteropErrc::BadScript: return "BadScript";
    }
    return "InteropError";
}

using InteropError = CodedError<InteropErrc>;

enum class HtlcState { Active, Claimed, Refunded };
std::string_view to_string(HtlcState s);

struct Htlc {
    std::uint64_t id = 0;
    Party depositor;
    /// When set, only this party may claim; otherwise whoever shows the key.
    std::optional<Party> beneficiary;
    Amount amount = 0;
    HashDigest hashlock;
    std::uint64_t expiry = 0;
    HtlcState state = HtlcState::Active;
    std::optional<Party> claimant;
    /// Published on this chain by a successful claim.
    std::optional<Bytes> revealed_key;
};

/// The lock m = SHA-256(k).
HashDigest hashlock_of(ByteView key);

/// One chain with a single fungible token and an HTLC facility.
class TokenChain {
public:
    TokenChain(std::string id, std::string token) : id_(std::move(id)), token_(std::move(token)) {}

    const std::string& id() const { return id_; }
    const std::string& token() const { return token_; }

    void mint(const Party& p, Amount amount);
    /// Throws InteropError(InsufficientFunds / BadAmount).
    void burn(const Party& p, Amount amount);
    void transfer(const Party& from, const Party& to, Amount amount);
    Amount balance(const Party& p) const;
    const std::map<Party, Amount>& balances() const { return balances_; }
    /// Held by parties plus escrowed in active contracts.
    Amount total_supply() const;
    Amount escrowed() const;

    /// Escrows the depositor's tokens. Throws InteropError(InsufficientFunds /
    /// BadAmount / PastExpiry).
    std::uint64_t htlc_create(const Party& depositor, Amount amount, const HashDigest& hashlock,
                              std::uint64_t expiry, std::uint64_t now,
                              std::optional<Party> beneficiary = std::nullopt);
    /// Pays the caller iff H(key) matches before expiry and publishes the key.
    /// Throws InteropError(UnknownContract / AlreadyTerminal / Expired /
    /// NotBeneficiary / BadKey).
    void htlc_claim(std::uint64_t id, const Party& caller, ByteView key, std::uint64_t now);
    /// Returns escrow to the depositor once expired. Throws InteropError
    /// (UnknownContract / AlreadyTerminal / NotYetExpired).
    void htlc_refund(std::uint64_t id, std::uint64_t now);

    const Htlc& htlc(std::uint64_t id) const;
    const std::map<std::uint64_t, Htlc>& htlcs() const { return htlcs_; }

private:
    Htlc& find(std::uint64_t id);

    std::string id_;
    std::string token_;
    std::map<Party, Amount> balances_;
    std::map<std::uint64_t, Htlc> htlcs_;
    std::uint64_t next_id_ = 1;
};

} // namespace bcw::interop
