#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "bcw/common/bytes.hpp"
#include "bcw/crypto/address.hpp"

namespace bcw::account {

using Amount = std::int64_t;
using Address = crypto::Address;

enum class AccountKind : std::uint8_t { External = 0, Contract = 1 };

struct Account {
    AccountKind kind = AccountKind::External;
    Amount balance = 0;
    std::uint64_t nonce = 0;
    std::string program_id;           // contracts only
    std::map<Bytes, Bytes> storage;   // contracts only

    bool operator==(const Account&) const = default;
};

/// Address -> Account. Copies are independent snapshots.
class WorldState {
public:
    const Account* find(const Address& a) const;
    /// Mutable access; creates an empty external account when absent.
    Account& at(const Address& a);
    bool contains(const Address& a) const { return accounts_.contains(a); }

    Amount balance_of(const Address& a) const;
    std::uint64_t nonce_of(const Address& a) const;
    Amount total_balance() const;
    const std::map<Address, Account>& accounts() const { return accounts_; }

    /// Merkle root over the serialized (address, account) records in address
    /// order; sha256d of the empty string for an empty state.
    HashDigest state_root() const;

    bool operator==(const WorldState&) const = default;

private:
    std::map<Address, Account> accounts_;
};

/// address[20] | u8 kind | i64 balance | u64 nonce | str program | u32 n | n * (bytes key | bytes value)
Bytes serialize_account(const Address& a, const Account& acct);

} // namespace bcw::account
