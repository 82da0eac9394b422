#include "bcw/netsim/double_spend.hpp"

#include <algorithm>
#include <cmath>

namespace bcw::netsim {

namespace {

bool attacker_block(double q, std::mt19937_64& rng) {
    return std::generate_canonical<double, 53>(rng) < q;
}

} // namespace

bool double_spend_trial(const RaceConfig& cfg, int k, double q, std::mt19937_64& rng) {
    if (q <= 0.0) return false;
    // Phase one: blocks arrive until the payment has k honest confirmations.
    int honest = 0;
    long long attacker = 0;
    while (honest < k) {
        if (attacker_block(q, rng))
            ++attacker;
        else
            ++honest;
    }
    long long deficit = static_cast<long long>(k) - attacker;
    // Giving up is only safe while a comeback is negligible: (q/p)^cap < 1e-12.
    long long cap = -1;
    if (q < 0.5) cap = std::max<long long>(cfg.max_deficit, static_cast<long long>(std::ceil(std::log(1e-12) / std::log(q / (1.0 - q)))));
    // Phase two: a random walk on the deficit; catching up wins.
    for (std::uint64_t i = 0; deficit > 0 && i < cfg.max_blocks; ++i) {
        if (cap >= 0 && deficit > cap) return false;
        deficit += attacker_block(q, rng) ? -1 : 1;
    }
    return deficit <= 0;
}

double DoubleSpendEstimate::std_error() const {
    if (trials == 0) return 0.0;
    const double r = rate();
    return std::sqrt(r * (1.0 - r) / static_cast<double>(trials));
}

DoubleSpendEstimate estimate_double_spend(const RaceConfig& cfg, int k, double q, std::uint64_t trials,
                                          std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    DoubleSpendEstimate e;
    e.trials = trials;
    for (std::uint64_t i = 0; i < trials; ++i) e.successes += double_spend_trial(cfg, k, q, rng) ? 1 : 0;
    return e;
}

} // namespace bcw::netsim
