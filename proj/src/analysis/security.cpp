#include "bcw/analysis/security.hpp"

#include <cmath>
#include <limits>

namespace bcw::analysis {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw AnalysisError(AnalysisErrc::InvalidParams, what);
}

double miss_all(const SecurityParams& s) {
    // (1-p)^(h n) via log1p so tiny p keep their precision.
    return std::exp(s.honest_threshold * s.n * std::log1p(-s.p));
}

} // namespace

void SecurityParams::validate() const {
    require(n >= 1, "n must be >= 1");
    require(p > 0 && p <= 1, "p must be in (0, 1]");
    require(q >= 0 && q < 1, "q must be in [0, 1)");
    require(epsilon > 0, "epsilon must be > 0");
    require(delta >= 0, "delta must be >= 0");
    require(honest_threshold > 0 && honest_threshold <= 1, "honest_threshold must be in (0, 1]");
    require(m >= 1, "m must be >= 1");
}

double rounds_per_good_block(const SecurityParams& s) {
    s.validate();
    return 1.0 / (1.0 - miss_all(s));
}

double efficiency(const SecurityParams& s) {
    s.validate();
    return 1.0 / (1.0 + s.delta * (1.0 - miss_all(s)));
}

double max_mining_prob(double q, double epsilon, double delta, int n, double honest_threshold) {
    require(q >= 0 && q < 1, "q must be in [0, 1)");
    require(epsilon > 0, "epsilon must be > 0");
    require(delta >= 0, "delta must be >= 0");
    require(n >= 1, "n must be >= 1");
    if (q == 0) return 1.0;
    const double ratio = (1 - q) / (q * (1 + epsilon));
    if (ratio <= 1)
        throw AnalysisError(AnalysisErrc::InfeasibleSecurity, "(1-q) <= q(1+eps): no block probability is secure");
    if (delta == 0) return 1.0;
    const double base = 1 - (ratio - 1) / delta;
    if (base <= 0) return 1.0;
    return -std::expm1(std::log(base) / (honest_threshold * n));
}

bool security_holds(const SecurityParams& s) {
    s.validate();
    if (s.q == 0) return true;
    return (1 - s.q) * efficiency(s) / s.q > 1 + s.epsilon;
}

double unfairness_bound(double q) {
    require(q >= 0 && q < 0.5, "q must be in [0, 0.5)");
    return (1 - 2 * q) / (1 - q);
}

BigInt target_for_probability(double p, int m) {
    require(p > 0 && p <= 1, "p must be in (0, 1]");
    require(m >= 1 && m <= 4096, "m out of range");
    int exp = 0;
    const double frac = std::frexp(p, &exp);
    BigInt mant = static_cast<std::uint64_t>(std::ldexp(frac, 53));
    const int shift = m + exp - 53;
    return shift >= 0 ? BigInt(mant << shift) : BigInt(mant >> -shift);
}

} // namespace bcw::analysis
