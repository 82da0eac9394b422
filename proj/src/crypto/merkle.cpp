#include "bcw/crypto/merkle.hpp"

#include "bcw/crypto/errors.hpp"
#include "bcw/crypto/hash.hpp"

namespace bcw::crypto {

namespace {

std::vector<HashDigest> hash_leaves(std::span<const Bytes> leaves) {
    std::vector<HashDigest> out;
    out.reserve(leaves.size());
    for (const auto& l : leaves) out.push_back(merkle_leaf_hash(l));
    return out;
}

std::vector<HashDigest> next_level(const std::vector<HashDigest>& level) {
    std::vector<HashDigest> up;
    up.reserve((level.size() + 1) / 2);
    for (std::size_t i = 0; i < level.size(); i += 2) {
        const auto& right = i + 1 < level.size() ? level[i + 1] : level[i];
        up.push_back(merkle_node_hash(level[i], right));
    }
    return up;
}

} // namespace

HashDigest merkle_leaf_hash(ByteView leaf) { return sha256d(leaf); }

HashDigest merkle_node_hash(const HashDigest& left, const HashDigest& right) {
    return sha256d(concat(left.view(), right.view()));
}

HashDigest merkle_root(std::span<const Bytes> leaves) {
    if (leaves.empty()) throw CryptoError(CryptoErrc::EmptyTree, "merkle tree needs at least one leaf");
    auto hashes = hash_leaves(leaves);
    return merkle_root_from_hashes(hashes);
}

HashDigest merkle_root_from_hashes(std::span<const HashDigest> leaf_hashes) {
    if (leaf_hashes.empty()) throw CryptoError(CryptoErrc::EmptyTree, "merkle tree needs at least one leaf");
    std::vector<HashDigest> level(leaf_hashes.begin(), leaf_hashes.end());
    while (level.size() > 1) level = next_level(level);
    return level.front();
}

MerkleProof merkle_prove(std::span<const Bytes> leaves, std::size_t index) {
    if (leaves.empty()) throw CryptoError(CryptoErrc::EmptyTree, "merkle tree needs at least one leaf");
    auto hashes = hash_leaves(leaves);
    return merkle_prove_from_hashes(hashes, index);
}

MerkleProof merkle_prove_from_hashes(std::span<const HashDigest> leaf_hashes, std::size_t index) {
    if (leaf_hashes.empty()) throw CryptoError(CryptoErrc::EmptyTree, "merkle tree needs at least one leaf");
    if (index >= leaf_hashes.size())
        throw CryptoError(CryptoErrc::IndexOutOfRange,
                          "leaf index " + std::to_string(index) + " >= " + std::to_string(leaf_hashes.size()));
    MerkleProof proof;
    std::vector<HashDigest> level(leaf_hashes.begin(), leaf_hashes.end());
    std::size_t pos = index;
    while (level.size() > 1) {
        if (pos % 2 == 0) {
            const auto& sib = pos + 1 < level.size() ? level[pos + 1] : level[pos];
            proof.push_back({sib, Side::Right});
        } else {
            proof.push_back({level[pos - 1], Side::Left});
        }
        level = next_level(level);
        pos /= 2;
    }
    return proof;
}

bool merkle_verify(const HashDigest& root, ByteView leaf, std::size_t index, const MerkleProof& proof) {
    return merkle_verify_hash(root, merkle_leaf_hash(leaf), index, proof);
}

bool merkle_verify_hash(const HashDigest& root, const HashDigest& leaf_hash, std::size_t index,
                        const MerkleProof& proof) {
    if (proof.size() >= 64) return false;
    HashDigest acc = leaf_hash;
    std::size_t pos = index;
    for (const auto& step : proof) {
        // The side flag must agree with the index bit, otherwise one proof
        // would verify for several positions.
        const bool is_right_child = pos & 1;
        if (is_right_child != (step.side == Side::Left)) return false;
        acc = step.side == Side::Left ? merkle_node_hash(step.sibling, acc) : merkle_node_hash(acc, step.sibling);
        pos >>= 1;
    }
    return pos == 0 && acc == root;
}

} // namespace bcw::crypto
