#include "bcw/crypto/ec.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <map>
#include <mutex>
#include <random>

namespace bcw::crypto {

namespace {

using U512 = boost::multiprecision::uint512_t;

// Arithmetic in F_p on fixed-width integers; every value is kept in [0, p).
struct Field {
    U512 p;
    U512 a;

    // Set when p = 2^256 - c for a small c (secp256k1), enabling a cheap reduction.
    U512 c;
    bool pseudo_mersenne = false;

    explicit Field(const CurveParams& cp) : p(cp.p.convert_to<U512>()), a(mod_floor(cp.a, cp.p).convert_to<U512>()) {
        const U512 two256 = U512(1) << 256;
        if (msb(p) == 255 && two256 - p < (U512(1) << 64)) {
            c = two256 - p;
            pseudo_mersenne = true;
        }
    }

    U512 reduce(U512 x) const {
        if (!pseudo_mersenne) return x % p;
        const U512 mask = (U512(1) << 256) - 1;
        while (x >> 256 != 0) x = (x >> 256) * c + (x & mask);
        while (x >= p) x -= p;
        return x;
    }

    U512 add(const U512& x, const U512& y) const {
        U512 r = x + y;
        if (r >= p) r -= p;
        return r;
    }
    U512 sub(const U512& x, const U512& y) const { return x >= y ? U512(x - y) : U512(x + p - y); }
    U512 mul(const U512& x, const U512& y) const { return reduce(x * y); }
    U512 dbl(const U512& x) const { return add(x, x); }
};

struct Jacobian {
    U512 x, y, z;  // z == 0 encodes infinity
};

struct Affine {
    U512 x, y;
};

CurvePoint from_jacobian(const Jacobian& j, const CurveParams& c, const Field& f) {
    if (j.z == 0) return CurvePoint::at_infinity();
    U512 zinv = mod_inverse(BigInt(j.z), c.p).convert_to<U512>();
    U512 zinv2 = f.mul(zinv, zinv);
    BigInt x(f.mul(j.x, zinv2));
    BigInt y(f.mul(j.y, f.mul(zinv2, zinv)));
    return CurvePoint::affine(std::move(x), std::move(y));
}

Jacobian jacobian_double(const Jacobian& j, const Field& f) {
    if (j.z == 0 || j.y == 0) return {1, 1, 0};
    U512 yy = f.mul(j.y, j.y);
    U512 s = f.dbl(f.dbl(f.mul(j.x, yy)));
    U512 xx = f.mul(j.x, j.x);
    U512 m = f.add(f.dbl(xx), xx);
    if (f.a != 0) {
        U512 z2 = f.mul(j.z, j.z);
        m = f.add(m, f.mul(f.a, f.mul(z2, z2)));
    }
    U512 x3 = f.sub(f.mul(m, m), f.dbl(s));
    U512 yyyy8 = f.dbl(f.dbl(f.dbl(f.mul(yy, yy))));
    U512 y3 = f.sub(f.mul(m, f.sub(s, x3)), yyyy8);
    U512 z3 = f.dbl(f.mul(j.y, j.z));
    return {x3, y3, z3};
}

// Jacobian + affine (mixed) addition.
Jacobian jacobian_add_affine(const Jacobian& j, const Affine& q, const Field& f) {
    if (j.z == 0) return {q.x, q.y, 1};
    U512 z2 = f.mul(j.z, j.z);
    U512 u2 = f.mul(q.x, z2);
    U512 s2 = f.mul(q.y, f.mul(z2, j.z));
    U512 h = f.sub(u2, j.x);
    U512 r = f.sub(s2, j.y);
    if (h == 0) {
        if (r == 0) return jacobian_double(j, f);
        return {1, 1, 0};
    }
    U512 hh = f.mul(h, h);
    U512 hhh = f.mul(hh, h);
    U512 v = f.mul(j.x, hh);
    U512 x3 = f.sub(f.sub(f.mul(r, r), hhh), f.dbl(v));
    U512 y3 = f.sub(f.mul(r, f.sub(v, x3)), f.mul(j.y, hhh));
    U512 z3 = f.mul(j.z, h);
    return {x3, y3, z3};
}

void require_on_curve(const CurvePoint& pt, const CurveParams& c) {
    if (!c.on_curve(pt)) throw CryptoError(CryptoErrc::OffCurve, "point is not on " + c.name);
}

std::vector<std::uint64_t> prime_factors(std::uint64_t n) {
    std::vector<std::uint64_t> out;
    for (std::uint64_t f = 2; f * f <= n; ++f) {
        if (n % f == 0) {
            out.push_back(f);
            while (n % f == 0) n /= f;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

CurveRef build_toy_curve(std::uint32_t p) {
    auto c = std::make_shared<CurveParams>();
    c->name = "toy" + std::to_string(p);
    c->a = 0;
    c->b = 7;
    c->p = p;

    std::vector<std::vector<std::uint32_t>> roots(p);
    for (std::uint64_t y = 0; y < p; ++y) roots[(y * y) % p].push_back(static_cast<std::uint32_t>(y));

    std::vector<CurvePoint> points;
    for (std::uint64_t x = 0; x < p; ++x) {
        std::uint64_t rhs = (x * x % p * x + 7) % p;
        for (auto y : roots[rhs]) points.push_back(CurvePoint::affine(x, y));
    }
    const std::uint64_t group_order = points.size() + 1;
    const auto factors = prime_factors(group_order);

    // ECDSA needs a prime-order generator: take the first point whose order
    // is the largest prime factor of the group order.
    const std::uint64_t subgroup = factors.back();
    CurvePoint best;
    std::uint64_t best_order = 0;
    for (const auto& pt : points) {
        if (scalar_mul(subgroup, pt, *c).infinity) {
            best_order = subgroup;
            best = pt;
            break;
        }
    }
    if (best_order == 0) throw CryptoError(CryptoErrc::InvalidCurve, "toy curve has no prime-order point");
    c->g = best;
    c->order = best_order;
    c->validate();
    return c;
}

} // namespace

bool CurveParams::on_curve(const CurvePoint& pt) const {
    if (pt.infinity) return true;
    if (pt.x < 0 || pt.x >= p || pt.y < 0 || pt.y >= p) return false;
    BigInt lhs = mod_floor(pt.y * pt.y, p);
    BigInt rhs = mod_floor(pt.x * pt.x * pt.x + a * pt.x + b, p);
    return lhs == rhs;
}

std::size_t CurveParams::field_bytes() const { return (msb(p) + 8) / 8; }

void CurveParams::validate() const {
    std::mt19937 gen(12345);
    if (p < 3 || !boost::multiprecision::miller_rabin_test(p, 25, gen))
        throw CryptoError(CryptoErrc::InvalidCurve, name + ": modulus is not prime");
    if (mod_floor(4 * a * a * a + 27 * b * b, p) == 0)
        throw CryptoError(CryptoErrc::InvalidCurve, name + ": singular curve");
    if (g.infinity || !on_curve(g))
        throw CryptoError(CryptoErrc::InvalidCurve, name + ": generator not on curve");
    if (order < 1 || !scalar_mul(order, g, *this).infinity)
        throw CryptoError(CryptoErrc::InvalidCurve, name + ": order * g is not infinity");
}

CurveRef secp256k1() {
    static const CurveRef curve = [] {
        auto c = std::make_shared<CurveParams>();
        c->name = "secp256k1";
        c->a = 0;
        c->b = 7;
        c->p = bigint_from_hex("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEFFFFFC2F");
        c->g = CurvePoint::affine(
            bigint_from_hex("79BE667EF9DCBBAC55A06295CE870B07029BFCDB2DCE28D959F2815B16F81798"),
            bigint_from_hex("483ADA7726A3C4655DA4FBFC0E1108A8FD17B448A68554199C47D08FFB10D4B8"));
        c->order = bigint_from_hex("FFFFFFFFFFFFFFFFFFFFFFFFFFFFFFFEBAAEDCE6AF48A03BBFD25E8CD0364141");
        return CurveRef(c);
    }();
    return curve;
}

CurveRef toy_curve(std::uint32_t p) {
    static std::mutex mu;
    static std::map<std::uint32_t, CurveRef> cache;
    std::lock_guard lock(mu);
    auto it = cache.find(p);
    if (it != cache.end()) return it->second;
    auto c = build_toy_curve(p);
    cache.emplace(p, c);
    return c;
}

CurveRef curve_by_name(std::string_view name) {
    if (name == "secp256k1" || name == "large") return secp256k1();
    if (name == "toy17") return toy_curve(17);
    if (name == "toy10007" || name == "toy") return toy_curve(10007);
    if (name.starts_with("toy:")) {
        auto digits = name.substr(4);
        std::uint32_t p = 0;
        for (char ch : digits) {
            if (ch < '0' || ch > '9' || p > 1'000'000)
                throw CryptoError(CryptoErrc::InvalidCurve, "bad toy curve modulus");
            p = p * 10 + static_cast<std::uint32_t>(ch - '0');
        }
        return toy_curve(p);
    }
    throw CryptoError(CryptoErrc::InvalidCurve, "unknown curve profile '" + std::string(name) + "'");
}

CurvePoint point_negate(const CurvePoint& pt, const CurveParams& params) {
    if (pt.infinity) return pt;
    return CurvePoint::affine(pt.x, mod_floor(-pt.y, params.p));
}

CurvePoint point_add(const CurvePoint& p1, const CurvePoint& p2, const CurveParams& c) {
    require_on_curve(p1, c);
    require_on_curve(p2, c);
    if (p1.infinity) return p2;
    if (p2.infinity) return p1;

    BigInt slope;
    if (p1.x == p2.x) {
        if (mod_floor(p1.y + p2.y, c.p) == 0) return CurvePoint::at_infinity();
        // Tangent at a point with y != 0.
        slope = mod_floor((3 * p1.x * p1.x + c.a) * mod_inverse(2 * p1.y, c.p), c.p);
    } else {
        slope = mod_floor((p2.y - p1.y) * mod_inverse(mod_floor(p2.x - p1.x, c.p), c.p), c.p);
    }
    BigInt x3 = mod_floor(slope * slope - p1.x - p2.x, c.p);
    BigInt y3 = mod_floor(slope * (p1.x - x3) - p1.y, c.p);
    return CurvePoint::affine(std::move(x3), std::move(y3));
}

CurvePoint scalar_mul(const BigInt& m, const CurvePoint& pt, const CurveParams& c, ScalarMulStats* stats) {
    if (m < 0) throw CryptoError(CryptoErrc::InvalidScalar, "negative scalar");
    require_on_curve(pt, c);
    if (m == 0 || pt.infinity) return CurvePoint::at_infinity();

    if (msb(c.p) >= 256) throw CryptoError(CryptoErrc::InvalidCurve, "field wider than 256 bits");
    const Field f(c);
    const Affine base{pt.x.convert_to<U512>(), pt.y.convert_to<U512>()};
    const auto top = msb(m);
    Jacobian acc{base.x, base.y, 1};
    for (auto bit = static_cast<std::ptrdiff_t>(top) - 1; bit >= 0; --bit) {
        acc = jacobian_double(acc, f);
        if (stats) ++stats->doublings;
        if (bit_test(m, static_cast<unsigned>(bit))) {
            acc = jacobian_add_affine(acc, base, f);
            if (stats) ++stats->additions;
        }
    }
    return from_jacobian(acc, c, f);
}

Bytes encode_point_compressed(const CurvePoint& pt, const CurveParams& params) {
    if (pt.infinity) throw CryptoError(CryptoErrc::PointAtInfinity, "cannot encode point at infinity");
    Bytes out;
    out.push_back(bit_test(pt.y, 0) ? 0x03 : 0x02);
    auto x = bigint_to_bytes(pt.x, params.field_bytes());
    out.insert(out.end(), x.begin(), x.end());
    return out;
}

} // namespace bcw::crypto
