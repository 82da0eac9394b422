#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bcw/common/bytes.hpp"
#include "bcw/crypto/address.hpp"

namespace bcw::account {

/// Function name plus positional byte-string arguments.
/// Encoding: str name | u32 argc | argc * var_bytes.
struct CallData {
    std::string function;
    std::vector<Bytes> args;

    Bytes encode() const;
    /// Throws DecodeError.
    static CallData decode(ByteView data);

    bool operator==(const CallData&) const = default;
};

Bytes arg_u64(std::uint64_t v);
Bytes arg_address(const crypto::Address& a);
/// Throw Revert-style DomainError("BadArgument") on malformed input.
std::uint64_t as_u64(ByteView b);
crypto::Address as_address(ByteView b);

} // namespace bcw::account
