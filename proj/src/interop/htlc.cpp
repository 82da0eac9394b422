#include "bcw/interop/htlc.hpp"

#include "bcw/crypto/hash.hpp"

namespace bcw::interop {

std::string_view to_string(HtlcState s) {
    switch (s) {
    case HtlcState::Active: return "active";
    case HtlcState::Claimed: return "claimed";
    case HtlcState::Refunded: return "refunded";
    }
    return "active";
}

HashDigest hashlock_of(ByteView key) { return crypto::sha256(key); }

void TokenChain::mint(const Party& p, Amount amount) {
    if (amount <= 0) throw InteropError(InteropErrc::BadAmount, "mint must be positive");
    balances_[p] += amount;
}

void TokenChain::burn(const Party& p, Amount amount) {
    if (amount <= 0) throw InteropError(InteropErrc::BadAmount, "burn must be positive");
    if (balance(p) < amount) throw InteropError(InteropErrc::InsufficientFunds, p + " holds too little " + token_);
    balances_[p] -= amount;
}

void TokenChain::transfer(const Party& from, const Party& to, Amount amount) {
    burn(from, amount);
    balances_[to] += amount;
}

Amount TokenChain::balance(const Party& p) const {
    auto it = balances_.find(p);
    return it == balances_.end() ? 0 : it->second;
}

Amount TokenChain::escrowed() const {
    Amount total = 0;
    for (const auto& [id, h] : htlcs_)
        if (h.state == HtlcState::Active) total += h.amount;
    return total;
}

Amount TokenChain::total_supply() const {
    Amount total = escrowed();
    for (const auto& [p, b] : balances_) total += b;
    return total;
}

std::uint64_t TokenChain::htlc_create(const Party& depositor, Amount amount, const HashDigest& hashlock,
                                      std::uint64_t expiry, std::uint64_t now, std::optional<Party> beneficiary) {
    if (expiry <= now) throw InteropError(InteropErrc::PastExpiry, "expiry must lie in the future");
    burn(depositor, amount);
    Htlc h;
    h.id = next_id_++;
    h.depositor = depositor;
    h.beneficiary = std::move(beneficiary);
    h.amount = amount;
    h.hashlock = hashlock;
    h.expiry = expiry;
    htlcs_[h.id] = h;
    return h.id;
}

Htlc& TokenChain::find(std::uint64_t id) {
    auto it = htlcs_.find(id);
    if (it == htlcs_.end()) throw InteropError(InteropErrc::UnknownContract, "no HTLC " + std::to_string(id));
    return it->second;
}

const Htlc& TokenChain::htlc(std::uint64_t id) const { return const_cast<TokenChain*>(this)->find(id); }

void TokenChain::htlc_claim(std::uint64_t id, const Party& caller, ByteView key, std::uint64_t now) {
    auto& h = find(id);
    if (h.state != HtlcState::Active) throw InteropError(InteropErrc::AlreadyTerminal, "HTLC already settled");
    if (now >= h.expiry) throw InteropError(InteropErrc::Expired, "HTLC expired");
    if (h.beneficiary && *h.beneficiary != caller)
        throw InteropError(InteropErrc::NotBeneficiary, caller + " is not the beneficiary");
    if (hashlock_of(key) != h.hashlock) throw InteropError(InteropErrc::BadKey, "H(k) does not match the lock");
    h.state = HtlcState::Claimed;
    h.claimant = caller;
    h.revealed_key = Bytes(key.begin(), key.end());
    balances_[caller] += h.amount;
}

void TokenChain::htlc_refund(std::uint64_t id, std::uint64_t now) {
    auto& h = find(id);
    if (h.state != HtlcState::Active) throw InteropError(InteropErrc::AlreadyTerminal, "HTLC already settled");
    if (now < h.expiry) throw InteropError(InteropErrc::NotYetExpired, "HTLC has not expired");
    h.state = HtlcState::Refunded;
    balances_[h.depositor] += h.amount;
}

} // namespace bcw::interop
