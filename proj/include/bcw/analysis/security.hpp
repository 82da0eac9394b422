#pragma once

#include <string_view>

#include "bcw/common/bigint.hpp"
#include "bcw/common/error.hpp"

namespace bcw::analysis {

enum class AnalysisErrc { InvalidParams, InfeasibleSecurity, Unreachable };

constexpr std::string_view to_string(AnalysisErrc c) {
    switch (c) {
    case AnalysisErrc::InvalidParams: return "InvalidParams";
    case AnalysisErrc::InfeasibleSecurity: return "InfeasibleSecurity";
    case AnalysisErrc::Unreachable: return "Unreachable";
    }
    return "AnalysisError";
}

using AnalysisError = CodedError<AnalysisErrc>;

inline constexpr double kHonestThreshold = 0.51;

struct SecurityParams {
    int n = 100;           // nodes
    double p = 0.01;       // per-node per-round block probability
    double q = 0.25;       // dishonest hashrate fraction
    double epsilon = 0.1;  // security margin
    double delta = 2;      // propagation delay in rounds
    double honest_threshold = kHonestThreshold;
    int m = 256;           // hash length in bits

    void validate() const;
};

/// Expected rounds until some honest node finds a block: 1 / (1 - (1-p)^(h n)).
double rounds_per_good_block(const SecurityParams& s);

/// E = 1 / (1 + delta * (1 - (1-p)^(h n))).
double efficiency(const SecurityParams& s);

/// Largest p keeping the honest effective rate above (1+eps) times the
/// adversary's. Returns 1 when q = 0, when delta = 0, or when every p < 1
/// works. Throws AnalysisError(InfeasibleSecurity) when (1-q) <= q (1+eps).
double max_mining_prob(double q, double epsilon, double delta, int n, double honest_threshold = kHonestThreshold);

/// (1-q) E / q > 1 + eps; true for q = 0.
bool security_holds(const SecurityParams& s);

/// (1-2q)/(1-q) for q in [0, 0.5).
double unfairness_bound(double q);

/// floor(p * 2^m): the target giving success probability p per hash.
BigInt target_for_probability(double p, int m = 256);

} // namespace bcw::analysis
