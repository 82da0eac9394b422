#include "bcw/chain/block.hpp"

#include <algorithm>

#include "bcw/crypto/hash.hpp"
#include "bcw/crypto/merkle.hpp"

namespace bcw::chain {

std::array<std::uint8_t, kHeaderSize> serialize_header(const BlockHeader& h) {
    Writer w;
    w.i32(h.version).digest(h.prev_hash).digest(h.merkle_root).u32(h.timestamp).u32(h.difficulty_compact).u32(h.nonce);
    std::array<std::uint8_t, kHeaderSize> out{};
    std::copy(w.data().begin(), w.data().end(), out.begin());
    return out;
}

BlockHeader deserialize_header(ByteView data) {
    if (data.size() != kHeaderSize) throw DecodeError("header must be 80 bytes");
    Reader r(data);
    BlockHeader h;
    h.version = r.i32();
    h.prev_hash = r.digest();
    h.merkle_root = r.digest();
    h.timestamp = r.u32();
    h.difficulty_compact = r.u32();
    h.nonce = r.u32();
    return h;
}

HashDigest block_id(const BlockHeader& h) {
    auto bytes = serialize_header(h);
    return crypto::sha256d(bytes);
}

Bytes serialize_block(const Block& b) {
    Writer w;
    auto header = serialize_header(b.header);
    w.raw(header);
    w.u32(static_cast<std::uint32_t>(b.transactions.size()));
    for (const auto& tx : b.transactions) ledger::write_tx(w, tx);
    return std::move(w).take();
}

Block deserialize_block(ByteView data) {
    if (data.size() > kMaxBlockSize) throw DecodeError("block exceeds size limit");
    if (data.size() < kHeaderSize) throw DecodeError("block shorter than a header");
    Block b;
    b.header = deserialize_header(data.first(kHeaderSize));
    Reader r(data.subspan(kHeaderSize));
    auto n = r.count(16);
    b.transactions.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) b.transactions.push_back(ledger::read_tx(r));
    r.expect_done();
    return b;
}

HashDigest compute_merkle_root(const std::vector<ledger::UtxoTransaction>& txs) {
    std::vector<HashDigest> ids;
    ids.reserve(txs.size());
    for (const auto& tx : txs) ids.push_back(ledger::txid(tx));
    return crypto::merkle_root_from_hashes(ids);
}

} // namespace bcw::chain
