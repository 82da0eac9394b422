#include <gtest/gtest.h>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/binomial.hpp>

#include <cmath>

#include "bcw/analysis/finality.hpp"
#include "bcw/analysis/security.hpp"

using namespace bcw::analysis;

namespace {

// Independent route: attacker mines n blocks while honest mine k (negative
// binomial), then must close a deficit of k - n, which a random walk with
// up-probability q does with probability (q/p)^deficit.
double catch_up_oracle(int k, double q) {
    const double p = 1 - q;
    double below = 0, mass = 0;
    for (int n = 0; n < k; ++n) {
        double pmf = boost::math::binomial_coefficient<double>(n + k - 1, n) * std::pow(p, k) * std::pow(q, n);
        mass += pmf;
        below += pmf * std::pow(q / p, k - n);
    }
    return below + (1 - mass);
}

} // namespace

TEST(FinalityOracle, SumMatchesCatchUpRecurrence) {
    for (double q : {0.05, 0.1, 0.2, 0.3, 0.4}) {
        for (int k = 1; k <= 30; ++k) EXPECT_NEAR(finality_prob_sum(k, q), catch_up_oracle(k, q), 1e-11) << k << " " << q;
    }
}

TEST(FinalityOracle, BetaMatchesBoostIbeta) {
    for (double q : {0.05, 0.15, 0.25, 0.35, 0.45}) {
        for (int k = 1; k <= 50; ++k) {
            double want = boost::math::ibeta(static_cast<double>(k), 0.5, 4 * q * (1 - q));
            EXPECT_NEAR(finality_prob_beta(k, q), want, 1e-12);
        }
    }
}

TEST(FinalityOracle, IncompleteBetaAgainstBoostOnAGrid) {
    for (double x : {0.01, 0.2, 0.5, 0.7, 0.99})
        for (double a : {0.5, 1.0, 3.0, 20.0})
            for (double b : {0.5, 2.0, 7.5})
                EXPECT_NEAR(regularized_incomplete_beta(x, a, b), boost::math::ibeta(a, b, x), 1e-12);
}

TEST(Finality, SixConfirmationsAtTenPercent) {
    EXPECT_NEAR(finality_prob_sum(6, 0.1), 0.0005914, 1e-7);
    EXPECT_NEAR(finality_prob_beta(6, 0.1), 0.0005914, 1e-7);
}

TEST(Finality, SumAndBetaFormsAgreeOnFullGrid) {
    for (int i = 1; i <= 9; ++i) {
        double q = 0.05 * i;
        for (int k = 1; k <= 50; ++k) EXPECT_NEAR(finality_prob_sum(k, q), finality_prob_beta(k, q), 1e-9);
    }
}

TEST(Finality, EdgeCases) {
    EXPECT_EQ(finality_prob_sum(0, 0.2), 1.0);
    EXPECT_EQ(finality_prob_sum(5, 0.0), 0.0);
    EXPECT_EQ(finality_prob_sum(5, 0.5), 1.0);
    EXPECT_EQ(finality_prob_beta(5, 0.6), 1.0);
    EXPECT_THROW(finality_prob_sum(-1, 0.1), AnalysisError);
    EXPECT_THROW(finality_prob_sum(3, 1.5), AnalysisError);
}

TEST(Finality, MonotoneInKAndQ) {
    for (int k = 1; k < 40; ++k) EXPECT_LT(finality_prob_sum(k + 1, 0.2), finality_prob_sum(k, 0.2));
    for (int i = 1; i < 9; ++i) EXPECT_LT(finality_prob_sum(6, 0.05 * i), finality_prob_sum(6, 0.05 * (i + 1)));
}

TEST(Finality, NegativeBinomialPmfSumsToOne) {
    double total = 0;
    for (int i = 0; i < 2000; ++i) total += nb_pmf(i, 6, 0.7);
    EXPECT_NEAR(total, 1.0, 1e-12);
}

TEST(Finality, ConfirmationsNeeded) {
    int k = confirmations_needed(0.1, 0.001);
    EXPECT_LE(finality_prob_sum(k, 0.1), 0.001);
    EXPECT_GT(finality_prob_sum(k - 1, 0.1), 0.001);
}

TEST(Finality, TableShape) {
    auto rows = finality_table({1, 2, 3}, {0.1, 0.3});
    ASSERT_EQ(rows.size(), 6u);
    EXPECT_EQ(rows[0].k, 1);
    EXPECT_DOUBLE_EQ(rows[0].p_sum, finality_prob_sum(rows[0].k, rows[0].q));
}

TEST(Security, UnfairnessBoundNearHalf) {
    EXPECT_NEAR(unfairness_bound(0.49), 0.0392, 1e-4);
    EXPECT_DOUBLE_EQ(unfairness_bound(0.0), 1.0);
    EXPECT_THROW(unfairness_bound(0.5), AnalysisError);
}

TEST(Security, MaxMiningProbIsTheSecurityBoundary) {
    // security_holds flips across max_mining_prob for a 5x5x5 grid.
    const double qs[] = {0.2, 0.25, 0.3, 0.35, 0.4};
    const double eps[] = {0.01, 0.05, 0.1, 0.15, 0.2};
    const double deltas[] = {5, 10, 20, 40, 80};
    int checked = 0;
    for (double q : qs)
        for (double e : eps)
            for (double d : deltas) {
                const int n = 100;
                double pm = max_mining_prob(q, e, d, n);
                ASSERT_LT(pm, 1.0);
                SecurityParams s;
                s.n = n, s.q = q, s.epsilon = e, s.delta = d;
                s.p = pm - 1e-6;
                if (s.p > 0) {
                    EXPECT_TRUE(security_holds(s)) << q << " " << e << " " << d;
                }
                s.p = pm + 1e-6;
                EXPECT_FALSE(security_holds(s)) << q << " " << e << " " << d;
                ++checked;
            }
    EXPECT_EQ(checked, 125);
}

TEST(Security, InfeasibleAndDegenerate) {
    EXPECT_THROW(max_mining_prob(0.49, 0.1, 2, 100), AnalysisError);
    EXPECT_EQ(max_mining_prob(0.2, 0.1, 0, 100), 1.0);
    EXPECT_EQ(max_mining_prob(0.0, 0.1, 2, 100), 1.0);
}

TEST(Security, EfficiencyAndGoodBlockRounds) {
    SecurityParams s;
    s.n = 100, s.p = 0.001, s.delta = 2;
    double miss = std::pow(1 - s.p, 0.51 * 100);
    EXPECT_NEAR(rounds_per_good_block(s), 1 / (1 - miss), 1e-12);
    EXPECT_NEAR(efficiency(s), 1 / (1 + 2 * (1 - miss)), 1e-12);
    s.delta = 0;
    EXPECT_DOUBLE_EQ(efficiency(s), 1.0);
}

TEST(Security, TargetForProbability) {
    auto t = target_for_probability(1.0 / 4096);
    EXPECT_EQ(t, bcw::BigInt(1) << 244);
    EXPECT_THROW(target_for_probability(0.0), AnalysisError);
}
