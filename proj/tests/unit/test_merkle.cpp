#include <gtest/gtest.h>

#include "bcw/crypto/errors.hpp"
#include "bcw/crypto/hash.hpp"
#include "bcw/crypto/merkle.hpp"

using namespace bcw;
using namespace bcw::crypto;

namespace {

std::vector<Bytes> leaves(std::size_t n) {
    std::vector<Bytes> out;
    for (std::size_t i = 0; i < n; ++i) out.push_back(to_bytes("leaf-" + std::to_string(i)));
    return out;
}

// Pair adjacent hashes level by level, repeating the last one when a level
// has odd length.
HashDigest oracle_root(std::vector<HashDigest> level) {
    while (level.size() > 1) {
        if (level.size() % 2) level.push_back(level.back());
        std::vector<HashDigest> up;
        for (std::size_t i = 0; i < level.size(); i += 2)
            up.push_back(sha256d(concat(level[i].view(), level[i + 1].view())));
        level = up;
    }
    return level[0];
}

} // namespace

TEST(MerkleOracle, RootMatchesReferenceConstruction) {
    for (std::size_t n = 1; n <= 33; ++n) {
        auto ls = leaves(n);
        std::vector<HashDigest> hs;
        for (const auto& l : ls) hs.push_back(sha256d(l));
        EXPECT_EQ(merkle_root(ls), oracle_root(hs)) << n;
    }
}

TEST(MerkleOracle, SingleLeafRootIsLeafHash) {
    auto ls = leaves(1);
    EXPECT_EQ(merkle_root(ls), merkle_leaf_hash(ls[0]));
    EXPECT_TRUE(merkle_prove(ls, 0).empty());
}

TEST(Merkle, EveryProofVerifiesExhaustively) {
    for (std::size_t n = 1; n <= 20; ++n) {
        auto ls = leaves(n);
        auto root = merkle_root(ls);
        for (std::size_t i = 0; i < n; ++i) {
            auto proof = merkle_prove(ls, i);
            EXPECT_TRUE(merkle_verify(root, ls[i], i, proof)) << n << " " << i;
            EXPECT_FALSE(merkle_verify(root, to_bytes("forged"), i, proof));
            if (n > 1) {
                for (std::size_t j = 0; j < n; ++j)
                    if (ls[j] != ls[i]) {
                        EXPECT_FALSE(merkle_verify(root, ls[j], i, proof));
                    }
            }
        }
    }
}

TEST(Merkle, ProofLengthIsLogarithmic) {
    auto ls = leaves(1000);
    EXPECT_EQ(merkle_prove(ls, 999).size(), 10u);
}

TEST(Merkle, TamperedProofFails) {
    auto ls = leaves(9);
    auto root = merkle_root(ls);
    auto proof = merkle_prove(ls, 4);
    for (std::size_t s = 0; s < proof.size(); ++s) {
        auto bad = proof;
        bad[s].sibling.bytes[0] ^= 1;
        EXPECT_FALSE(merkle_verify(root, ls[4], 4, bad));
    }
}

TEST(Merkle, Errors) {
    std::vector<Bytes> none;
    EXPECT_THROW(merkle_root(none), CryptoError);
    auto ls = leaves(3);
    EXPECT_THROW(merkle_prove(ls, 3), CryptoError);
}
