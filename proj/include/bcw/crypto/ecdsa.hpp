#pragma once

#include <cstdint>
#include <string_view>

#include "bcw/crypto/ec.hpp"

namespace bcw::crypto {

struct Signature {
    BigInt r = 0;
    BigInt s = 0;

    bool operator==(const Signature&) const = default;
};

struct KeyPair {
    BigInt secret;
    CurvePoint pub;
    CurveRef curve;
};

/// Private scalar in [1, order-1] from an arbitrary secret; throws
/// CryptoError(InvalidScalar) outside that range.
KeyPair keypair_from_secret(const BigInt& secret, CurveRef curve);

/// Deterministic key from a 64-bit seed.
KeyPair keygen(std::uint64_t seed, CurveRef curve = secp256k1());

/// Deterministic key from a human label ("alice"); used by scenarios.
KeyPair keypair_from_label(std::string_view label, CurveRef curve = secp256k1());

/// ECDSA over the key's curve with a nonce derived from (secret, message).
Signature sign(const KeyPair& key, ByteView message);

bool verify(const CurveParams& curve, const CurvePoint& pub, ByteView message, const Signature& sig);

} // namespace bcw::crypto
