#include "bcw/chain/difficulty.hpp"

#include <cmath>
#include <sstream>

namespace bcw::chain {

namespace {

constexpr std::uint32_t kMantissaMax = 0xFFFFFF;

BigInt pow2(int e) { return BigInt(1) << e; }

} // namespace

BigInt default_pow_limit() { return BigInt(65535) << 208; }

Difficulty Difficulty::normalize(BigInt num, BigInt den) {
    if (den <= 0 || num <= 0) throw DomainError("BadDifficulty", "difficulty must be positive");
    if (num < den) return Difficulty{};

    // Scale so that num/den lands in [2^23, 2^24), then floor.
    int e = static_cast<int>(msb(num)) - static_cast<int>(msb(den)) - 23;
    BigInt m;
    for (;;) {
        m = e >= 0 ? BigInt(num / BigInt(den << e)) : BigInt(BigInt(num << -e) / den);
        if (m > kMantissaMax) {
            ++e;
        } else if (m < (1u << 23)) {
            --e;
        } else {
            break;
        }
    }
    auto mant = static_cast<std::uint32_t>(m);
    while ((mant & 1u) == 0) {
        mant >>= 1;
        ++e;
    }
    if (e > 127 || e < -128) throw DomainError("BadDifficulty", "difficulty exponent out of range");
    return Difficulty{mant, e};
}

Difficulty Difficulty::from_integer(std::uint64_t v) {
    if (v == 0) throw DomainError("BadDifficulty", "difficulty must be positive");
    return normalize(BigInt(v), 1);
}

Difficulty Difficulty::from_ratio(const BigInt& num, const BigInt& den) { return normalize(num, den); }

Difficulty Difficulty::from_double(double v) {
    if (!(v > 0) || !std::isfinite(v)) throw DomainError("BadDifficulty", "difficulty must be a positive number");
    int exp = 0;
    double frac = std::frexp(v, &exp);  // v = frac * 2^exp, frac in [0.5, 1)
    auto m = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    BigInt num = m;
    BigInt den = 1;
    int shift = exp - 53;
    if (shift >= 0) {
        num <<= shift;
    } else {
        den <<= -shift;
    }
    return normalize(num, den);
}

Difficulty Difficulty::decode(std::uint32_t compact) {
    const std::uint32_t m = compact & kMantissaMax;
    const int e = static_cast<int>(compact >> 24) - 128;
    if (m == 0) throw DomainError("BadDifficulty", "zero mantissa");
    if ((m & 1u) == 0) throw DomainError("BadDifficulty", "non-canonical mantissa");
    Difficulty d{m, e};
    if (d.numerator() < d.denominator()) throw DomainError("BadDifficulty", "difficulty below 1");
    return d;
}

std::uint32_t Difficulty::encode() const {
    return (static_cast<std::uint32_t>(exponent_ + 128) << 24) | mantissa_;
}

BigInt Difficulty::numerator() const { return exponent_ >= 0 ? BigInt(mantissa_) << exponent_ : BigInt(mantissa_); }

BigInt Difficulty::denominator() const { return exponent_ >= 0 ? BigInt(1) : pow2(-exponent_); }

double Difficulty::to_double() const { return std::ldexp(static_cast<double>(mantissa_), exponent_); }

std::string Difficulty::str() const {
    std::ostringstream os;
    os.precision(17);
    os << to_double();
    return os.str();
}

Difficulty Difficulty::operator*(const Difficulty& o) const {
    return normalize(numerator() * o.numerator(), denominator() * o.denominator());
}

std::strong_ordering Difficulty::operator<=>(const Difficulty& o) const {
    BigInt lhs = numerator() * o.denominator();
    BigInt rhs = o.numerator() * denominator();
    if (lhs < rhs) return std::strong_ordering::less;
    if (lhs > rhs) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
}

BigInt target_from_difficulty(const Difficulty& d, const BigInt& pow_limit) {
    if (pow_limit <= 0) throw DomainError("BadDifficulty", "pow limit must be positive");
    return pow_limit * d.denominator() / d.numerator();
}

Difficulty retarget(const DifficultyParams& d, std::int64_t epoch_elapsed_seconds) {
    if (epoch_elapsed_seconds <= 0) throw DomainError("BadElapsed", "epoch duration must be positive");
    BigInt num = d.difficulty.numerator() * BigInt(d.epoch_target_seconds());
    BigInt den = d.difficulty.denominator() * BigInt(epoch_elapsed_seconds);
    return Difficulty::from_ratio(num, den);
}

} // namespace bcw::chain
