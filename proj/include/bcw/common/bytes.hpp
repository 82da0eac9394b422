#pragma once

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bcw {

using Bytes = std::vector<std::uint8_t>;
using ByteView = std::span<const std::uint8_t>;

std::string to_hex(ByteView data);
Bytes from_hex(std::string_view hex);

inline ByteView as_bytes(std::string_view s) {
    return {reinterpret_cast<const std::uint8_t*>(s.data()), s.size()};
}

inline Bytes to_bytes(std::string_view s) {
    auto v = as_bytes(s);
    return {v.begin(), v.end()};
}

Bytes concat(ByteView a, ByteView b);

/// Fixed-size 32-byte digest. Ordering is lexicographic over the bytes, which
/// is also numeric order when the digest is read as a big-endian integer.
struct HashDigest {
    std::array<std::uint8_t, 32> bytes{};

    static constexpr std::size_t size() { return 32; }
    ByteView view() const { return {bytes.data(), bytes.size()}; }
    std::string hex() const { return to_hex(view()); }
    static HashDigest from_hex(std::string_view hex);
    static HashDigest from_bytes(ByteView data);
    bool is_zero() const;

    auto operator<=>(const HashDigest&) const = default;
};

} // namespace bcw
