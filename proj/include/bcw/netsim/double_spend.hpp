#pragma once

#include <cstdint>
#include <random>

namespace bcw::netsim {

/// Block-by-block race between honest miners and a private attacker. Each new
/// block is the attacker's with probability q.
struct RaceConfig {
    /// The attacker gives up once this far behind; raised automatically so a
    /// comeback from there has probability below 1e-12. Unused for q >= 0.5.
    int max_deficit = 60;
    /// Hard cap on blocks examined after the merchant accepts.
    std::uint64_t max_blocks = 1'000'000;
};

/// One trial: the merchant accepts after k honest blocks on top of the
/// payment; the attacker has been mining a conflicting branch from the
/// payment's parent all along and wins on catching up (a tie counts).
bool double_spend_trial(const RaceConfig& cfg, int k, double q, std::mt19937_64& rng);

struct DoubleSpendEstimate {
    std::uint64_t trials = 0;
    std::uint64_t successes = 0;
    double rate() const { return trials ? static_cast<double>(successes) / static_cast<double>(trials) : 0.0; }
    /// Binomial standard error of rate().
    double std_error() const;
};

DoubleSpendEstimate estimate_double_spend(const RaceConfig& cfg, int k, double q, std::uint64_t trials,
                                          std::uint64_t seed);

} // namespace bcw::netsim
