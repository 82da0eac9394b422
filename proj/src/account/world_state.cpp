#include "bcw/account/world_state.hpp"

#include "bcw/common/serialize.hpp"
#include "bcw/crypto/hash.hpp"
#include "bcw/crypto/merkle.hpp"

namespace bcw::account {

const Account* WorldState::find(const Address& a) const {
    auto it = accounts_.find(a);
    return it == accounts_.end() ? nullptr : &it->second;
}

Account& WorldState::at(const Address& a) { return accounts_[a]; }

Amount WorldState::balance_of(const Address& a) const {
    const Account* acct = find(a);
    return acct ? acct->balance : 0;
}

std::uint64_t WorldState::nonce_of(const Address& a) const {
    const Account* acct = find(a);
    return acct ? acct->nonce : 0;
}

Amount WorldState::total_balance() const {
    Amount total = 0;
    for (const auto& [addr, acct] : accounts_) total += acct.balance;
    return total;
}

Bytes serialize_account(const Address& a, const Account& acct) {
    Writer w;
    w.raw(ByteView(a.payload.data(), a.payload.size()));
    w.u8(static_cast<std::uint8_t>(acct.kind)).i64(acct.balance).u64(acct.nonce).str(acct.program_id);
    w.u32(static_cast<std::uint32_t>(acct.storage.size()));
    for (const auto& [k, v] : acct.storage) w.var_bytes(k).var_bytes(v);
    return std::move(w).take();
}

HashDigest WorldState::state_root() const {
    if (accounts_.empty()) return crypto::sha256d({});
    std::vector<Bytes> leaves;
    leaves.reserve(accounts_.size());
    for (const auto& [addr, acct] : accounts_) leaves.push_back(serialize_account(addr, acct));
    return crypto::merkle_root(leaves);
}

} // namespace bcw::account
