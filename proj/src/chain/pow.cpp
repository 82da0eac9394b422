#include "bcw/chain/pow.hpp"

#include <algorithm>

#include "bcw/crypto/hash.hpp"

namespace bcw::chain {

bool meets_target(const HashDigest& id, const BigInt& target) { return digest_to_bigint(id) < target; }

MineOutcome mine_block(Block tmpl, const BigInt& target, const MineLimits& limits) {
    if (tmpl.transactions.empty() || !tmpl.transactions.front().is_coinbase())
        throw DomainError("BadCoinbase", "block template needs a coinbase at index 0");
    const std::uint64_t inner = std::min<std::uint64_t>(limits.header_nonces, 1ull << 32);

    MineOutcome out;
    for (std::uint64_t cb = 0; limits.max_coinbase_nonces == 0 || cb < limits.max_coinbase_nonces; ++cb) {
        tmpl.transactions.front().coinbase_nonce = cb;
        tmpl.header.merkle_root = compute_merkle_root(tmpl.transactions);
        auto bytes = serialize_header(tmpl.header);
        for (std::uint64_t n = 0; n < inner; ++n) {
            if (limits.cancel && (n & 0xfff) == 0 && limits.cancel->load(std::memory_order_relaxed)) return out;
            // Nonce occupies the last four header bytes.
            for (int i = 0; i < 4; ++i) bytes[76 + i] = static_cast<std::uint8_t>(n >> (8 * i));
            ++out.tries;
            if (meets_target(crypto::sha256d(bytes), target)) {
                tmpl.header.nonce = static_cast<std::uint32_t>(n);
                out.block = std::move(tmpl);
                return out;
            }
        }
    }
    return out;
}

} // namespace bcw::chain
