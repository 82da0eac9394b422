#pragma once

#include <array>
#include <compare>
#include <string>
#include <string_view>

#include "bcw/crypto/ec.hpp"
#include "bcw/crypto/hash.hpp"

namespace bcw::crypto {

inline constexpr std::uint8_t kAddressVersion = 0x00;

/// 20-byte RIPEMD160(SHA256(pubkey)) payload; Base58Check on demand.
struct Address {
    Hash160 payload{};

    std::string encoded() const;
    /// Throws CryptoError(BadChecksum / InvalidBase58) on malformed input.
    static Address decode(std::string_view text);
    static Address from_payload(ByteView bytes);
    bool is_zero() const;

    auto operator<=>(const Address&) const = default;
};

/// Hashes the compressed point encoding. Throws for the point at infinity.
Address derive_address(const CurvePoint& pub, const CurveParams& params);

} // namespace bcw::crypto
