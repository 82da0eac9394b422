#include "bcw/analysis/finality.hpp"

#include <cmath>
#include <limits>

namespace bcw::analysis {

namespace {

double log_choose_nb(int i, int k) {
    // log C(i+k-1, i)
    return std::lgamma(i + k) - std::lgamma(i + 1.0) - std::lgamma(static_cast<double>(k));
}

// Continued fraction for the incomplete beta (modified Lentz).
double beta_cf(double x, double a, double b) {
    constexpr int kMaxIter = 10000;
    constexpr double kEps = 1e-16;
    constexpr double kTiny = 1e-300;
    const double qab = a + b;
    const double qap = a + 1;
    const double qam = a - 1;
    double c = 1;
    double d = 1 - qab * x / qap;
    if (std::fabs(d) < kTiny) d = kTiny;
    d = 1 / d;
    double h = d;
    for (int m = 1; m <= kMaxIter; ++m) {
        const int m2 = 2 * m;
        double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1 / d;
        h *= d * c;
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1 + aa * d;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = 1 + aa / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1) < kEps) return h;
    }
    return h;
}

} // namespace

double nb_pmf(int i, int k, double p) {
    if (i < 0 || k < 1 || !(p >= 0 && p <= 1))
        throw AnalysisError(AnalysisErrc::InvalidParams, "nb_pmf needs i >= 0, k >= 1, p in [0, 1]");
    if (p == 1) return i == 0 ? 1.0 : 0.0;
    if (p == 0) return 0.0;
    return std::exp(log_choose_nb(i, k) + i * std::log1p(-p) + k * std::log(p));
}

double finality_prob_sum(int k, double q) {
    if (k < 0 || !(q >= 0 && q <= 1)) throw AnalysisError(AnalysisErrc::InvalidParams, "need k >= 0, q in [0, 1]");
    if (k == 0 || q >= 0.5) return 1.0;
    if (q == 0) return 0.0;
    const double p = 1 - q;
    const double lq = std::log(q);
    const double lp = std::log(p);
    double sum = 0;
    for (int i = 0; i <= k; ++i) {
        const double lc = log_choose_nb(i, k);
        sum += std::exp(lc + i * lq + k * lp) - std::exp(lc + k * lq + i * lp);
    }
    const double result = 1 - sum;
    return result < 0 ? 0.0 : result;
}

double regularized_incomplete_beta(double x, double a, double b) {
    if (!(x >= 0 && x <= 1) || a <= 0 || b <= 0)
        throw AnalysisError(AnalysisErrc::InvalidParams, "incomplete beta needs x in [0,1], a, b > 0");
    if (x == 0) return 0.0;
    if (x == 1) return 1.0;
    const double log_front =
        std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) + a * std::log(x) + b * std::log1p(-x);
    if (x < (a + 1) / (a + b + 2)) return std::exp(log_front) * beta_cf(x, a, b) / a;
    return 1 - std::exp(log_front) * beta_cf(1 - x, b, a) / b;
}

double finality_prob_beta(int k, double q) {
    if (k < 0 || !(q >= 0 && q <= 1)) throw AnalysisError(AnalysisErrc::InvalidParams, "need k >= 0, q in [0, 1]");
    if (k == 0) return finality_prob_sum(k, q);
    if (q >= 0.5) return 1.0;
    return regularized_incomplete_beta(4 * q * (1 - q), k, 0.5);
}

int confirmations_needed(double q, double tolerance) {
    if (!(q >= 0 && q < 0.5))
        throw AnalysisError(AnalysisErrc::Unreachable, "attacker with q >= 0.5 always catches up");
    if (!(tolerance > 0)) throw AnalysisError(AnalysisErrc::InvalidParams, "tolerance must be > 0");
    for (int k = 0; k < 100000; ++k) {
        if (finality_prob_sum(k, q) <= tolerance) return k;
    }
    throw AnalysisError(AnalysisErrc::Unreachable, "tolerance not reached below 100000 confirmations");
}

std::vector<FinalityRow> finality_table(const std::vector<int>& ks, const std::vector<double>& qs) {
    std::vector<FinalityRow> rows;
    for (double q : qs)
        for (int k : ks) rows.push_back({k, q, finality_prob_sum(k, q), finality_prob_beta(k, q)});
    return rows;
}

} // namespace bcw::analysis
