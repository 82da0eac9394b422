#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "bcw/common/bytes.hpp"
#include "bcw/common/error.hpp"
#include "bcw/common/serialize.hpp"
#include "bcw/crypto/address.hpp"
#include "bcw/crypto/ecdsa.hpp"

namespace bcw::ledger {

/// Amounts are integers in units of 1e-8 coin.
using Amount = std::int64_t;
inline constexpr Amount kCoin = 100'000'000;
inline constexpr Amount kMaxMoney = 21'000'000 * kCoin;

struct OutPoint {
    HashDigest txid;
    std::uint32_t index = 0;

    auto operator<=>(const OutPoint&) const = default;
    std::string str() const;
};

struct TxOutput {
    Amount amount = 0;
    crypto::Address recipient;

    bool operator==(const TxOutput&) const = default;
};

struct TxInput {
    OutPoint outpoint;
    crypto::CurvePoint pubkey;
    crypto::Signature signature;

    bool operator==(const TxInput&) const = default;
};

/// Inputs are empty iff the transaction is a coinbase. A coinbase carries its
/// block height (so coinbases at different heights never share a txid) and the
/// extra nonce that the miner varies in the outer PoW loop.
struct UtxoTransaction {
    std::vector<TxInput> inputs;
    std::vector<TxOutput> outputs;
    std::uint64_t coinbase_height = 0;
    std::uint64_t coinbase_nonce = 0;

    bool is_coinbase() const { return inputs.empty(); }
    Amount total_out() const;

    bool operator==(const UtxoTransaction&) const = default;
};

/// Layout (little-endian):
///   u32 version=1 | u32 n_in | n_in * input | u32 n_out | n_out * output
///   | (coinbase only) u64 height | u64 coinbase_nonce
/// input  = txid[32] | u32 index | pubkey | sig.r | sig.s
/// pubkey = u8 len + big-endian x | u8 len + big-endian y
/// output = i64 amount | payload[20]
Bytes serialize(const UtxoTransaction& tx);
/// Strict inverse of serialize; throws DecodeError.
UtxoTransaction deserialize_tx(ByteView data);
UtxoTransaction read_tx(Reader& r);
void write_tx(Writer& w, const UtxoTransaction& tx);

HashDigest txid(const UtxoTransaction& tx);

/// sha256d of the serialization with every signature set to (0, 0).
HashDigest signing_digest(const UtxoTransaction& tx);

/// Fills in the signature of input `index` (the key must own it).
void sign_input(UtxoTransaction& tx, std::size_t index, const crypto::KeyPair& key);

} // namespace bcw::ledger
