#include "bcw/crypto/commitment.hpp"

#include <random>

#include "bcw/crypto/errors.hpp"
#include "bcw/crypto/hash.hpp"

namespace bcw::crypto {

namespace {

void check_nonce(ByteView nonce, std::size_t bits) {
    if (bits < kMinNonceBits)
        throw CryptoError(CryptoErrc::InvalidNonceLength, "nonce must have at least 8 bits");
    const std::size_t bytes = (bits + 7) / 8;
    if (nonce.size() != bytes)
        throw CryptoError(CryptoErrc::InvalidNonceLength,
                          "expected " + std::to_string(bytes) + " nonce bytes, got " + std::to_string(nonce.size()));
    // Big-endian: unused high bits live in the first byte.
    const std::size_t spare = bytes * 8 - bits;
    if (spare > 0 && (nonce[0] >> (8 - spare)) != 0)
        throw CryptoError(CryptoErrc::InvalidNonceLength, "nonce has bits above its declared width");
}

} // namespace

Commitment commit(ByteView nonce, std::size_t nonce_bits, ByteView message) {
    check_nonce(nonce, nonce_bits);
    Commitment out;
    out.c = sha256(concat(nonce, message));
    out.nonce.assign(nonce.begin(), nonce.end());
    out.nonce_bits = nonce_bits;
    out.message.assign(message.begin(), message.end());
    return out;
}

bool verify_commit(const HashDigest& c, ByteView nonce, std::size_t nonce_bits, ByteView message) {
    try {
        check_nonce(nonce, nonce_bits);
    } catch (const CryptoError&) {
        return false;
    }
    return sha256(concat(nonce, message)) == c;
}

Bytes make_nonce(std::size_t nonce_bits, std::uint64_t seed) {
    if (nonce_bits < kMinNonceBits)
        throw CryptoError(CryptoErrc::InvalidNonceLength, "nonce must have at least 8 bits");
    std::mt19937_64 rng(seed);
    Bytes out((nonce_bits + 7) / 8);
    for (auto& b : out) b = static_cast<std::uint8_t>(rng() & 0xff);
    const std::size_t spare = out.size() * 8 - nonce_bits;
    if (spare > 0) out[0] &= static_cast<std::uint8_t>(0xff >> spare);
    return out;
}

} // namespace bcw::crypto
