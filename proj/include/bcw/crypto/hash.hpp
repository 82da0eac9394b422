#pragma once

#include <array>

#include "bcw/common/bytes.hpp"

namespace bcw::crypto {

using Hash160 = std::array<std::uint8_t, 20>;

HashDigest sha256(ByteView data);
HashDigest sha256d(ByteView data);
Hash160 ripemd160(ByteView data);
/// RIPEMD160(SHA256(data)), the address hash.
Hash160 hash160(ByteView data);

} // namespace bcw::crypto
