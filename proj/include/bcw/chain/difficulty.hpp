#pragma once

#include <compare>
#include <cstdint>
#include <string>

#include "bcw/common/bigint.hpp"
#include "bcw/common/error.hpp"

namespace bcw::chain {

/// The classic maximum target, 65535 << 208.
BigInt default_pow_limit();

/// Positive binary-float rational: mantissa * 2^exponent with a 24-bit odd
/// mantissa (canonical form). Always >= 1.
///
/// Compact encoding (4 bytes): bits 31..24 hold exponent + 128, bits 23..0
/// hold the mantissa.
class Difficulty {
public:
    Difficulty() = default;  // 1

    static Difficulty from_integer(std::uint64_t v);
    /// Largest representable value <= num/den, clamped to >= 1.
    static Difficulty from_ratio(const BigInt& num, const BigInt& den);
    static Difficulty from_double(double v);
    /// Throws DomainError("BadDifficulty") for non-canonical or < 1 encodings.
    static Difficulty decode(std::uint32_t compact);

    std::uint32_t encode() const;
    std::uint32_t mantissa() const { return mantissa_; }
    int exponent() const { return exponent_; }
    BigInt numerator() const;
    BigInt denominator() const;
    double to_double() const;
    std::string str() const;

    Difficulty operator*(const Difficulty& o) const;

    bool operator==(const Difficulty&) const = default;
    std::strong_ordering operator<=>(const Difficulty& o) const;

private:
    Difficulty(std::uint32_t m, int e) : mantissa_(m), exponent_(e) {}
    static Difficulty normalize(BigInt num, BigInt den);

    std::uint32_t mantissa_ = 1;
    int exponent_ = 0;
};

struct DifficultyParams {
    Difficulty difficulty;
    std::uint32_t epoch_length = 2016;
    std::uint32_t target_block_interval = 600;

    std::int64_t epoch_target_seconds() const {
        return static_cast<std::int64_t>(epoch_length) * target_block_interval;
    }
};

/// floor(pow_limit / difficulty). Throws DomainError("BadDifficulty") when the
/// limit is not positive.
BigInt target_from_difficulty(const Difficulty& d, const BigInt& pow_limit = default_pow_limit());

/// D * (epoch_length * interval) / elapsed, which is 2D/T for T in weeks at the
/// default parameters. Clamped at >= 1 only. Throws DomainError("BadElapsed")
/// for elapsed <= 0.
Difficulty retarget(const DifficultyParams& d, std::int64_t epoch_elapsed_seconds);

inline constexpr std::int64_t kSecondsPerWeek = 7 * 24 * 3600;

} // namespace bcw::chain
