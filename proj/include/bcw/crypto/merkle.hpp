#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "bcw/common/bytes.hpp"

namespace bcw::crypto {

/// Which side of the running hash the sibling sits on.
enum class Side : std::uint8_t { Left = 0, Right = 1 };

struct ProofStep {
    HashDigest sibling;
    Side side;

    bool operator==(const ProofStep&) const = default;
};

using MerkleProof = std::vector<ProofStep>;

/// H(D) for a leaf; H is double SHA-256.
HashDigest merkle_leaf_hash(ByteView leaf);
/// H(left || right)
HashDigest merkle_node_hash(const HashDigest& left, const HashDigest& right);

/// An odd node at any level is paired with a copy of itself.
/// Throws CryptoError(EmptyTree) for no leaves.
HashDigest merkle_root(std::span<const Bytes> leaves);
HashDigest merkle_root_from_hashes(std::span<const HashDigest> leaf_hashes);

/// Sibling path, bottom-up. Throws CryptoError(IndexOutOfRange).
MerkleProof merkle_prove(std::span<const Bytes> leaves, std::size_t index);
MerkleProof merkle_prove_from_hashes(std::span<const HashDigest> leaf_hashes, std::size_t index);

bool merkle_verify(const HashDigest& root, ByteView leaf, std::size_t index, const MerkleProof& proof);
bool merkle_verify_hash(const HashDigest& root, const HashDigest& leaf_hash, std::size_t index,
                        const MerkleProof& proof);

} // namespace bcw::crypto
