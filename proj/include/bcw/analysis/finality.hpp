#pragma once

#include <vector>

#include "bcw/analysis/security.hpp"

namespace bcw::analysis {

/// P(X = i) for X ~ NB(k, p): C(i+k-1, i) (1-p)^i p^k, evaluated in log space.
double nb_pmf(int i, int k, double p);

/// Probability that an attacker with hashrate q eventually overtakes after the
/// merchant has seen k blocks, both sides starting together:
///   1 - sum_{i=0..k} C(i+k-1, i) (q^i p^k - q^k p^i).
/// 1 for k = 0 and for q >= 0.5.
double finality_prob_sum(int k, double q);

/// Same probability as the regularized incomplete beta I_{4pq}(k, 1/2).
/// k = 0 falls back to the sum form.
double finality_prob_beta(int k, double q);

/// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction.
double regularized_incomplete_beta(double x, double a, double b);

/// Smallest k with P(k) <= tolerance. Throws AnalysisError(Unreachable) for q >= 0.5.
int confirmations_needed(double q, double tolerance);

struct FinalityRow {
    int k;
    double q;
    double p_sum;
    double p_beta;
};

std::vector<FinalityRow> finality_table(const std::vector<int>& ks, const std::vector<double>& qs);

} // namespace bcw::analysis
