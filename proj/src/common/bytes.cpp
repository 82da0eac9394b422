#include "bcw/common/bytes.hpp"

#include <algorithm>

#include "bcw/common/bigint.hpp"
#include "bcw/common/error.hpp"

namespace bcw {

namespace {

int hex_value(char c) {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    if (c >= 'A' && c <= 'F') return c - 'A' + 10;
    return -1;
}

} // namespace

std::string to_hex(ByteView data) {
    static constexpr char digits[] = "0123456789abcdef";
    std::string out;
    out.reserve(data.size() * 2);
    for (auto b : data) {
        out.push_back(digits[b >> 4]);
        out.push_back(digits[b & 0xf]);
    }
    return out;
}

Bytes from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    if (hex.size() % 2 != 0) throw DecodeError("hex string has odd length");
    Bytes out(hex.size() / 2);
    for (std::size_t i = 0; i < out.size(); ++i) {
        int hi = hex_value(hex[2 * i]);
        int lo = hex_value(hex[2 * i + 1]);
        if (hi < 0 || lo < 0) throw DecodeError("invalid hex digit");
        out[i] = static_cast<std::uint8_t>(hi << 4 | lo);
    }
    return out;
}

Bytes concat(ByteView a, ByteView b) {
    Bytes out;
    out.reserve(a.size() + b.size());
    out.insert(out.end(), a.begin(), a.end());
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

HashDigest HashDigest::from_hex(std::string_view hex) { return from_bytes(bcw::from_hex(hex)); }

HashDigest HashDigest::from_bytes(ByteView data) {
    if (data.size() != 32) throw DecodeError("digest must be exactly 32 bytes");
    HashDigest d;
    std::copy(data.begin(), data.end(), d.bytes.begin());
    return d;
}

bool HashDigest::is_zero() const {
    return std::all_of(bytes.begin(), bytes.end(), [](auto b) { return b == 0; });
}

Bytes bigint_to_bytes(const BigInt& v) {
    if (v < 0) throw DomainError("EncodingError", "negative integer");
    Bytes out;
    boost::multiprecision::export_bits(v, std::back_inserter(out), 8, true);
    if (out.size() == 1 && out[0] == 0) out.clear();
    return out;
}

Bytes bigint_to_bytes(const BigInt& v, std::size_t width) {
    Bytes raw = bigint_to_bytes(v);
    if (raw.size() > width) throw DomainError("EncodingError", "integer does not fit width");
    Bytes out(width - raw.size(), 0);
    out.insert(out.end(), raw.begin(), raw.end());
    return out;
}

BigInt bigint_from_bytes(ByteView be) {
    BigInt v = 0;
    if (!be.empty()) boost::multiprecision::import_bits(v, be.begin(), be.end(), 8, true);
    return v;
}

BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt t = 0, new_t = 1;
    BigInt r = m, new_r = mod_floor(a, m);
    while (new_r != 0) {
        BigInt q = r / new_r;
        BigInt tmp = t - q * new_t;
        t = std::move(new_t);
        new_t = std::move(tmp);
        tmp = r - q * new_r;
        r = std::move(new_r);
        new_r = std::move(tmp);
    }
    if (r != 1) return 0;
    return mod_floor(t, m);
}

std::string bigint_to_hex(const BigInt& v) {
    auto b = bigint_to_bytes(v);
    if (b.empty()) return "0";
    std::string h = to_hex(b);
    if (h[0] == '0') h.erase(0, 1);
    return h;
}

BigInt bigint_from_hex(std::string_view hex) {
    if (hex.starts_with("0x") || hex.starts_with("0X")) hex.remove_prefix(2);
    std::string padded(hex);
    if (padded.size() % 2) padded.insert(padded.begin(), '0');
    return bigint_from_bytes(from_hex(padded));
}

} // namespace bcw
