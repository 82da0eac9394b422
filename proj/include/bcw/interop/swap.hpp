#pragma once

#include <optional>
#include <string>
#include <vector>

#include "bcw/interop/htlc.hpp"

namespace bcw::interop {

struct SwapParams {
    Amount amount_x = 10;
    Amount amount_y = 10;
    /// Absolute expiry of Alice's contract on chain X (claimed by Bob).
    std::uint64_t alice_expiry = 20;
    /// Absolute expiry of Bob's contract on chain Y (claimed by Alice).
    std::uint64_t bob_expiry = 10;
    /// Ticks Bob may take between seeing the key and claiming.
    std::uint64_t claim_latency = 2;
    /// When an honest Alice claims on chain Y.
    std::uint64_t alice_claim_time = 2;
    std::uint64_t seed = 1;

    /// Requires alice_expiry > bob_expiry + claim_latency and an honest
    /// claim time inside Bob's window. Throws InteropError(UnsafeExpiries).
    void validate() const;
};

enum class SwapScenario { Honest, BobAborts, AliceNeverClaims, AliceClaimsLate };
std::string_view to_string(SwapScenario s);
/// "honest", "bob_aborts", "alice_never_claims", "alice_claims_late".
SwapScenario parse_scenario(std::string_view s);

enum class SwapPhase { Setup, BobFunded, Claimed, Refunded };
std::string_view to_string(SwapPhase p);

enum class SwapOutcome { Swapped, Refunded, Mixed };
std::string_view to_string(SwapOutcome o);

struct SwapTranscript {
    SwapScenario scenario = SwapScenario::Honest;
    std::vector<std::string> events;
    SwapPhase phase = SwapPhase::Setup;
    SwapOutcome outcome = SwapOutcome::Refunded;
    bool bob_learned_key = false;
    /// Final holdings: chain X (token X) and chain Y (token Y).
    std::map<Party, Amount> chain_x;
    std::map<Party, Amount> chain_y;

    std::string to_json() const;
};

/// Alice swaps X for Bob's Y through two HTLCs sharing m = H(k).
SwapTranscript run_atomic_swap(SwapScenario scenario, const SwapParams& params = {});

struct ExplorationResult {
    std::uint64_t states = 0;
    std::uint64_t terminals = 0;
    std::uint64_t swapped = 0;
    std::uint64_t refunded = 0;
    std::uint64_t mixed = 0;
    /// Action sequence reaching the first mixed terminal state, if any.
    std::vector<std::string> counterexample;
};

/// Exhaustive search over every interleaving of the two-contract protocol in
/// integer time. Alice may act arbitrarily; Bob funds only after Alice and
/// claims within claim_latency of the key appearing. Expiry ordering is not
/// checked here so unsafe parameters can be explored.
ExplorationResult explore_swap(const SwapParams& params);

} // namespace bcw::interop
