#include "bcw/crypto/address.hpp"

#include <algorithm>

#include "bcw/crypto/base58.hpp"

namespace bcw::crypto {

std::string Address::encoded() const {
    return base58check_encode(kAddressVersion, ByteView(payload.data(), payload.size()));
}

Address Address::decode(std::string_view text) {
    auto decoded = base58check_decode(text);
    if (decoded.version != kAddressVersion)
        throw CryptoError(CryptoErrc::BadChecksum, "unexpected address version byte");
    return from_payload(decoded.payload);
}

Address Address::from_payload(ByteView bytes) {
    if (bytes.size() != 20) throw CryptoError(CryptoErrc::InvalidBase58, "address payload must be 20 bytes");
    Address a;
    std::copy(bytes.begin(), bytes.end(), a.payload.begin());
    return a;
}

bool Address::is_zero() const {
    return std::all_of(payload.begin(), payload.end(), [](std::uint8_t b) { return b == 0; });
}

Address derive_address(const CurvePoint& pub, const CurveParams& params) {
    if (pub.infinity) throw CryptoError(CryptoErrc::PointAtInfinity, "cannot derive address of infinity");
    if (!params.on_curve(pub)) throw CryptoError(CryptoErrc::OffCurve, "public key not on curve");
    Address a;
    a.payload = hash160(encode_point_compressed(pub, params));
    return a;
}

} // namespace bcw::crypto
