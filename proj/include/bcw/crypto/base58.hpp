#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "bcw/common/bytes.hpp"

namespace bcw::crypto {

inline constexpr std::string_view kBase58Alphabet =
    "123456789ABCDEFGHJKLMNPQRSTUVWXYZabcdefghijkmnopqrstuvwxyz";

std::string base58_encode(ByteView data);
/// Throws CryptoError(InvalidBase58) on characters outside the alphabet.
Bytes base58_decode(std::string_view text);

/// version || payload || first four bytes of sha256d(version || payload).
std::string base58check_encode(std::uint8_t version, ByteView payload);

struct Base58CheckPayload {
    std::uint8_t version;
    Bytes payload;
};

/// Throws CryptoError(BadChecksum) when the trailing checksum does not match.
Base58CheckPayload base58check_decode(std::string_view text);

} // namespace bcw::crypto
