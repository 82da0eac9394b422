#pragma once

#include <string_view>

#include "bcw/common/error.hpp"

namespace bcw::crypto {

enum class CryptoErrc {
    OffCurve,
    PointAtInfinity,
    InvalidScalar,
    InvalidCurve,
    InvalidNonceLength,
    InvalidBase58,
    BadChecksum,
    EmptyTree,
    IndexOutOfRange,
};

constexpr std::string_view to_string(CryptoErrc c) {
    switch (c) {
    case CryptoErrc::OffCurve: return "OffCurve";
    case CryptoErrc::PointAtInfinity: return "PointAtInfinity";
    case CryptoErrc::InvalidScalar: return "InvalidScalar";
    case CryptoErrc::InvalidCurve: return "InvalidCurve";
    case CryptoErrc::InvalidNonceLength: return "InvalidNonceLength";
    case CryptoErrc::InvalidBase58: return "InvalidBase58";
    case CryptoErrc::BadChecksum: return "BadChecksum";
    case CryptoErrc::EmptyTree: return "EmptyTree";
    case CryptoErrc::IndexOutOfRange: return "IndexOutOfRange";
    }
    return "CryptoError";
}

using CryptoError = CodedError<CryptoErrc>;

} // namespace bcw::crypto
