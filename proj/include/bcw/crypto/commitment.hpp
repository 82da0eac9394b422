#pragma once

#include <cstddef>
#include <cstdint>

#include "bcw/common/bytes.hpp"

namespace bcw::crypto {

inline constexpr std::size_t kDefaultNonceBits = 256;
inline constexpr std::size_t kMinNonceBits = 8;

/// Hash commitment c = SHA256(r || x). The prover keeps (nonce, message).
struct Commitment {
    HashDigest c;
    Bytes nonce;
    std::size_t nonce_bits = kDefaultNonceBits;
    Bytes message;
};

/// Throws CryptoError(InvalidNonceLength) unless the nonce is exactly
/// ceil(bits/8) bytes with no bits set above `nonce_bits`.
Commitment commit(ByteView nonce, std::size_t nonce_bits, ByteView message);

bool verify_commit(const HashDigest& c, ByteView nonce, std::size_t nonce_bits, ByteView message);

/// Uniform nonce of the requested width drawn from a seeded generator.
Bytes make_nonce(std::size_t nonce_bits, std::uint64_t seed);

} // namespace bcw::crypto
