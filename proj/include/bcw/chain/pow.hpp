#pragma once

#include <atomic>
#include <cstdint>
#include <optional>

#include "bcw/chain/block.hpp"
#include "bcw/common/bigint.hpp"

namespace bcw::chain {

/// Block id read as a big-endian 256-bit integer must be strictly below target.
bool meets_target(const HashDigest& id, const BigInt& target);

struct MineLimits {
    /// Outer loop: number of coinbase_nonce values to try (0 = unbounded).
    std::uint64_t max_coinbase_nonces = 0;
    /// Inner loop: header nonces per coinbase_nonce, at most 2^32.
    std::uint64_t header_nonces = 1ull << 32;
    /// Optional cooperative cancellation.
    const std::atomic<bool>* cancel = nullptr;
};

struct MineOutcome {
    std::optional<Block> block;  // empty when exhausted or cancelled
    std::uint64_t tries = 0;
};

/// Scans (coinbase_nonce, header_nonce) from (0, 0): header nonce in the inner
/// loop, coinbase nonce in the outer loop with the merkle root recomputed each
/// time. The template's first transaction must be a coinbase.
MineOutcome mine_block(Block tmpl, const BigInt& target, const MineLimits& limits = {});

} // namespace bcw::chain
