#include "bcw/crypto/ecdsa.hpp"

#include "bcw/common/serialize.hpp"
#include "bcw/crypto/hash.hpp"

namespace bcw::crypto {

namespace {

BigInt message_scalar(ByteView message, const BigInt& order) {
    return mod_floor(digest_to_bigint(sha256(message)), order);
}

// Maps arbitrary bytes into [1, order-1].
BigInt scalar_from_seed(ByteView seed, const BigInt& order) {
    return mod_floor(digest_to_bigint(sha256d(seed)), order - 1) + 1;
}

} // namespace

KeyPair keypair_from_secret(const BigInt& secret, CurveRef curve) {
    if (!curve) throw CryptoError(CryptoErrc::InvalidCurve, "no curve");
    if (secret < 1 || secret >= curve->order)
        throw CryptoError(CryptoErrc::InvalidScalar, "private scalar outside [1, order-1]");
    KeyPair kp{secret, scalar_mul(secret, curve->g, *curve), curve};
    return kp;
}

KeyPair keygen(std::uint64_t seed, CurveRef curve) {
    Writer w;
    w.str("bcw-keygen").u64(seed);
    return keypair_from_secret(scalar_from_seed(w.data(), curve->order), curve);
}

KeyPair keypair_from_label(std::string_view label, CurveRef curve) {
    Writer w;
    w.str("bcw-label").str(label);
    return keypair_from_secret(scalar_from_seed(w.data(), curve->order), curve);
}

Signature sign(const KeyPair& key, ByteView message) {
    const CurveParams& c = *key.curve;
    const BigInt& n = c.order;
    if (key.secret < 1 || key.secret >= n) throw CryptoError(CryptoErrc::InvalidScalar, "bad private scalar");
    const BigInt e = message_scalar(message, n);
    const Bytes secret_bytes = bigint_to_bytes(key.secret);

    // Deterministic nonce: H(secret || message || counter), retried until the
    // signature components are usable. Toy orders may be composite.
    for (std::uint32_t counter = 0; counter < 4096; ++counter) {
        Writer w;
        w.var_bytes(secret_bytes).var_bytes(message).u32(counter);
        BigInt k = mod_floor(digest_to_bigint(sha256d(w.data())), n);
        if (k == 0) continue;
        BigInt kinv = mod_inverse(k, n);
        if (kinv == 0) continue;
        CurvePoint kg = scalar_mul(k, c.g, c);
        if (kg.infinity) continue;
        BigInt r = mod_floor(kg.x, n);
        if (r == 0) continue;
        BigInt s = mod_floor(kinv * (e + r * key.secret), n);
        if (s == 0 || mod_inverse(s, n) == 0) continue;
        return {std::move(r), std::move(s)};
    }
    // Only reachable on very small toy groups.
    throw CryptoError(CryptoErrc::InvalidScalar, "no usable signing nonce for this key and message");
}

bool verify(const CurveParams& c, const CurvePoint& pub, ByteView message, const Signature& sig) {
    const BigInt& n = c.order;
    if (pub.infinity || !c.on_curve(pub)) return false;
    if (sig.r < 1 || sig.r >= n || sig.s < 1 || sig.s >= n) return false;
    BigInt w = mod_inverse(sig.s, n);
    if (w == 0) return false;
    BigInt e = message_scalar(message, n);
    BigInt u1 = mod_floor(e * w, n);
    BigInt u2 = mod_floor(sig.r * w, n);
    CurvePoint x = point_add(scalar_mul(u1, c.g, c), scalar_mul(u2, pub, c), c);
    if (x.infinity) return false;
    return mod_floor(x.x, n) == sig.r;
}

} // namespace bcw::crypto
