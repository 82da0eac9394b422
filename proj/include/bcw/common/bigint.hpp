#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "bcw/common/bytes.hpp"

namespace bcw {

using BigInt = boost::multiprecision::cpp_int;

/// Minimal big-endian encoding; zero encodes as an empty byte string.
Bytes bigint_to_bytes(const BigInt& v);

/// Big-endian encoding left-padded to `width` bytes. Throws if it does not fit.
Bytes bigint_to_bytes(const BigInt& v, std::size_t width);

BigInt bigint_from_bytes(ByteView be);

inline BigInt digest_to_bigint(const HashDigest& d) { return bigint_from_bytes(d.view()); }

/// Non-negative residue of v mod m.
inline BigInt mod_floor(const BigInt& v, const BigInt& m) {
    BigInt r = v % m;
    if (r < 0) r += m;
    return r;
}

/// Modular inverse via extended Euclid; returns 0 when gcd(a, m) != 1.
BigInt mod_inverse(const BigInt& a, const BigInt& m);

std::string bigint_to_hex(const BigInt& v);
BigInt bigint_from_hex(std::string_view hex);

} // namespace bcw
