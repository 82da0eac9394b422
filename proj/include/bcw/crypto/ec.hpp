#pragma once

#include <memory>
#include <string>
#include <vector>

#include "bcw/common/bigint.hpp"
#include "bcw/crypto/errors.hpp"

namespace bcw::crypto {

/// A point on a short Weierstrass curve, or the point at infinity.
struct CurvePoint {
    BigInt x = 0;
    BigInt y = 0;
    bool infinity = true;

    static CurvePoint at_infinity() { return {}; }
    static CurvePoint affine(BigInt x, BigInt y) { return {std::move(x), std::move(y), false}; }

    bool operator==(const CurvePoint& o) const {
        if (infinity || o.infinity) return infinity == o.infinity;
        return x == o.x && y == o.y;
    }
};

/// y^2 = x^3 + a x + b over F_p with a generator of known order.
struct CurveParams {
    std::string name;
    BigInt a;
    BigInt b;
    BigInt p;
    CurvePoint g;
    BigInt order;

    bool on_curve(const CurvePoint& pt) const;
    /// Byte width of a field element.
    std::size_t field_bytes() const;
    /// Checks discriminant, generator membership and order * g == infinity.
    /// Throws CryptoError(InvalidCurve).
    void validate() const;
};

using CurveRef = std::shared_ptr<const CurveParams>;

/// The Bitcoin curve y^2 = x^3 + 7 over p = 2^256 - 2^32 - 977.
CurveRef secp256k1();

/// y^2 = x^3 + 7 (mod p) for a small prime p. The generator is the first point
/// (in x, then y order) whose order is the largest prime factor of the group
/// order, so signatures work modulo a prime.
/// Enumerates the group, so keep p below ~10^5.
CurveRef toy_curve(std::uint32_t p);

/// "secp256k1", "large", "toy17", "toy10007", or "toy:<p>".
CurveRef curve_by_name(std::string_view name);

CurvePoint point_negate(const CurvePoint& pt, const CurveParams& params);

/// Chord-and-tangent group law. Throws CryptoError(OffCurve) for inputs not
/// on the curve.
CurvePoint point_add(const CurvePoint& p, const CurvePoint& q, const CurveParams& params);

struct ScalarMulStats {
    std::size_t doublings = 0;
    std::size_t additions = 0;
};

/// Left-to-right double-and-add: floor(log2 m) doublings plus one addition per
/// extra set bit. m must be non-negative.
CurvePoint scalar_mul(const BigInt& m, const CurvePoint& pt, const CurveParams& params,
                      ScalarMulStats* stats = nullptr);

/// SEC1 compressed form, 0x02/0x03 prefix followed by x padded to field width.
Bytes encode_point_compressed(const CurvePoint& pt, const CurveParams& params);

} // namespace bcw::crypto
