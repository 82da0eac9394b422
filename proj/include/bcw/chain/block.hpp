#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "bcw/common/serialize.hpp"
#include "bcw/ledger/transaction.hpp"

namespace bcw::chain {

inline constexpr std::size_t kHeaderSize = 80;
inline constexpr std::size_t kMaxBlockSize = 4u << 20;

struct BlockHeader {
    std::int32_t version = 1;
    HashDigest prev_hash;
    HashDigest merkle_root;
    std::uint32_t timestamp = 0;
    std::uint32_t difficulty_compact = 0;
    std::uint32_t nonce = 0;

    bool operator==(const BlockHeader&) const = default;
};

/// version(4) | prev_hash(32) | merkle_root(32) | timestamp(4) | difficulty(4) | nonce(4)
std::array<std::uint8_t, kHeaderSize> serialize_header(const BlockHeader& h);
BlockHeader deserialize_header(ByteView data);

/// sha256d over the 80 header bytes. Not stored anywhere in the block.
HashDigest block_id(const BlockHeader& h);

struct Block {
    BlockHeader header;
    std::vector<ledger::UtxoTransaction> transactions;

    bool operator==(const Block&) const = default;
};

/// header(80) | u32 tx_count | transactions
Bytes serialize_block(const Block& b);
/// Strict inverse of serialize_block; throws DecodeError.
Block deserialize_block(ByteView data);

/// Merkle root over the txids (each txid is used directly as the leaf hash).
HashDigest compute_merkle_root(const std::vector<ledger::UtxoTransaction>& txs);

} // namespace bcw::chain
