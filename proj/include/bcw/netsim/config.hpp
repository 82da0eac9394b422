#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/common/error.hpp"

namespace bcw::netsim {

enum class SimErrc {
    InvalidConfig,
    InvalidTopology,
    SafetyViolation,
};

constexpr std::string_view to_string(SimErrc c) {
    switch (c) {
    case SimErrc::InvalidConfig: return "InvalidConfig";
    case SimErrc::InvalidTopology: return "InvalidTopology";
    case SimErrc::SafetyViolation: return "SafetyViolation";
    }
    return "SimError";
}

using SimError = CodedError<SimErrc>;

enum class Strategy { Honest, Selfish, Silent };

std::string_view to_string(Strategy s);
/// "honest", "selfish" or "silent"; throws SimError(InvalidConfig).
Strategy parse_strategy(std::string_view s);

enum class TopologyKind { RandomRegular, Ring, Complete, Explicit };

struct TopologySpec {
    TopologyKind kind = TopologyKind::RandomRegular;
    int degree = 4;
    /// Used only for Explicit; must be symmetric.
    std::vector<std::vector<int>> neighbors;
};

struct SimConfig {
    int n = 20;
    TopologySpec topology;
    /// Per-node per-round probability of creating a block.
    double p = 0.01;
    /// Rounds between sending and delivery.
    int delta = 1;
    /// Share of nodes that run the honest strategy; the rest run
    /// `adversary`. Ignored when `strategies` is given.
    double honest_fraction = 0.51;
    Strategy adversary = Strategy::Selfish;
    /// Optional explicit per-node tags, overriding honest_fraction.
    std::vector<Strategy> strategies;
    int rounds = 500;
    std::uint64_t seed = 1;
    /// Probability per round that some node issues a payment.
    double tx_rate = 0.0;
    std::size_t max_block_txs = 100;
    bool trace = false;

    /// Throws SimError(InvalidConfig).
    void validate() const;
    /// The tag each node runs, resolved from `strategies` or honest_fraction.
    std::vector<Strategy> resolved_strategies() const;
};

/// Strict JSON ingestion: unknown keys and wrongly typed values are errors.
SimConfig config_from_json(std::string_view text);
std::string config_to_json(const SimConfig& c);

} // namespace bcw::netsim
