#include "bcw/crypto/base58.hpp"

#include <algorithm>

#include "bcw/crypto/errors.hpp"
#include "bcw/crypto/hash.hpp"

namespace bcw::crypto {

std::string base58_encode(ByteView data) {
    std::size_t zeros = 0;
    while (zeros < data.size() && data[zeros] == 0) ++zeros;

    // Repeated division of the big-endian number by 58, digits little-endian.
    std::vector<std::uint8_t> digits;
    digits.reserve(data.size() * 138 / 100 + 1);
    for (std::size_t i = zeros; i < data.size(); ++i) {
        int carry = data[i];
        for (auto& d : digits) {
            carry += d * 256;
            d = static_cast<std::uint8_t>(carry % 58);
            carry /= 58;
        }
        while (carry > 0) {
            digits.push_back(static_cast<std::uint8_t>(carry % 58));
            carry /= 58;
        }
    }

    std::string out(zeros, '1');
    for (auto it = digits.rbegin(); it != digits.rend(); ++it) out.push_back(kBase58Alphabet[*it]);
    return out;
}

Bytes base58_decode(std::string_view text) {
    std::size_t ones = 0;
    while (ones < text.size() && text[ones] == '1') ++ones;

    std::vector<std::uint8_t> bytes;  // little-endian
    for (std::size_t i = ones; i < text.size(); ++i) {
        auto pos = kBase58Alphabet.find(text[i]);
        if (pos == std::string_view::npos)
            throw CryptoError(CryptoErrc::InvalidBase58, "character outside Base58 alphabet");
        int carry = static_cast<int>(pos);
        for (auto& b : bytes) {
            carry += b * 58;
            b = static_cast<std::uint8_t>(carry & 0xff);
            carry >>= 8;
        }
        while (carry > 0) {
            bytes.push_back(static_cast<std::uint8_t>(carry & 0xff));
            carry >>= 8;
        }
    }

    Bytes out(ones, 0);
    out.insert(out.end(), bytes.rbegin(), bytes.rend());
    return out;
}

std::string base58check_encode(std::uint8_t version, ByteView payload) {
    Bytes buf;
    buf.reserve(payload.size() + 5);
    buf.push_back(version);
    buf.insert(buf.end(), payload.begin(), payload.end());
    auto check = sha256d(buf);
    buf.insert(buf.end(), check.bytes.begin(), check.bytes.begin() + 4);
    return base58_encode(buf);
}

Base58CheckPayload base58check_decode(std::string_view text) {
    Bytes raw = base58_decode(text);
    if (raw.size() < 5) throw CryptoError(CryptoErrc::BadChecksum, "Base58Check string too short");
    ByteView body(raw.data(), raw.size() - 4);
    auto check = sha256d(body);
    if (!std::equal(check.bytes.begin(), check.bytes.begin() + 4, raw.end() - 4))
        throw CryptoError(CryptoErrc::BadChecksum, "Base58Check checksum mismatch");
    return {raw[0], Bytes(raw.begin() + 1, raw.end() - 4)};
}

} // namespace bcw::crypto
