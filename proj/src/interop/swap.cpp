#include "bcw/interop/swap.hpp"

#include <functional>
#include <set>
#include <tuple>

#include <json.hpp>

#include "bcw/common/serialize.hpp"
#include "bcw/crypto/hash.hpp"

namespace bcw::interop {

void SwapParams::validate() const {
    if (amount_x <= 0 || amount_y <= 0) throw InteropError(InteropErrc::BadAmount, "swap amounts must be positive");
    if (alice_expiry <= bob_expiry + claim_latency)
        throw InteropError(InteropErrc::UnsafeExpiries, "need alice_expiry > bob_expiry + claim_latency");
    if (alice_claim_time < 2 || alice_claim_time >= bob_expiry)
        throw InteropError(InteropErrc::UnsafeExpiries, "Alice's claim must fall in [2, bob_expiry)");
}

std::string_view to_string(SwapScenario s) {
    switch (s) {
    case SwapScenario::Honest: return "honest";
    case SwapScenario::BobAborts: return "bob_aborts";
    case SwapScenario::AliceNeverClaims: return "alice_never_claims";
    case SwapScenario::AliceClaimsLate: return "alice_claims_late";
    }
    return "honest";
}

SwapScenario parse_scenario(std::string_view s) {
    for (auto sc : {SwapScenario::Honest, SwapScenario::BobAborts, SwapScenario::AliceNeverClaims,
                    SwapScenario::AliceClaimsLate})
        if (to_string(sc) == s) return sc;
    throw InteropError(InteropErrc::BadScript, "unknown swap scenario '" + std::string(s) + "'");
}

std::string_view to_string(SwapPhase p) {
    switch (p) {
    case SwapPhase::Setup: return "setup";
    case SwapPhase::BobFunded: return "bob_funded";
    case SwapPhase::Claimed: return "claimed";
    case SwapPhase::Refunded: return "refunded";
    }
    return "setup";
}

std::string_view to_string(SwapOutcome o) {
    switch (o) {
    case SwapOutcome::Swapped: return "swapped";
    case SwapOutcome::Refunded: return "refunded";
    case SwapOutcome::Mixed: return "mixed";
    }
    return "mixed";
}

std::string SwapTranscript::to_json() const {
    nlohmann::ordered_json j;
    j["scenario"] = to_string(scenario);
    j["phase"] = to_string(phase);
    j["outcome"] = to_string(outcome);
    j["bob_learned_key"] = bob_learned_key;
    j["events"] = events;
    j["chain_x"] = chain_x;
    j["chain_y"] = chain_y;
    return j.dump(2) + "\n";
}

SwapTranscript run_atomic_swap(SwapScenario scenario, const SwapParams& params) {
    params.validate();
    const Party alice = "Alice", bob = "Bob";
    TokenChain x("X", "USDX"), y("Y", "USDY");
    x.mint(alice, params.amount_x);
    y.mint(bob, params.amount_y);

    SwapTranscript tr;
    tr.scenario = scenario;
    auto log = [&](std::uint64_t t, const std::string& s) { tr.events.push_back("t=" + std::to_string(t) + ": " + s); };

    // Alice's secret k and lock m = H(k).
    Writer w;
    w.str("bcw-swap-secret").u64(params.seed);
    const auto k_digest = crypto::sha256(w.data());
    const Bytes k(k_digest.view().begin(), k_digest.view().end());
    const auto m = hashlock_of(k);
    log(0, "Alice picks secret k and sends m = " + m.hex() + " to Bob");

    const auto alice_htlc = x.htlc_create(alice, params.amount_x, m, params.alice_expiry, 0, bob);
    log(0, "Alice locks " + std::to_string(params.amount_x) + " USDX on X until t=" + std::to_string(params.alice_expiry));

    std::optional<std::uint64_t> bob_htlc;
    std::optional<Bytes> bob_key;
    std::optional<std::uint64_t> reveal_time;
    const std::uint64_t end = params.alice_expiry;

    for (std::uint64_t t = 1; t <= end; ++t) {
        if (t == 1 && scenario != SwapScenario::BobAborts) {
            // Bob checks Alice's contract before funding his own.
            const auto& h = x.htlc(alice_htlc);
            if (h.state == HtlcState::Active && h.hashlock == m && h.expiry > params.bob_expiry + params.claim_latency) {
                bob_htlc = y.htlc_create(bob, params.amount_y, m, params.bob_expiry, t, alice);
                tr.phase = SwapPhase::BobFunded;
                log(t, "Bob locks " + std::to_string(params.amount_y) + " USDY on Y until t=" +
                           std::to_string(params.bob_expiry));
            }
        }
        if (t == 1 && scenario == SwapScenario::BobAborts) log(t, "Bob walks away without funding");

        const bool claim_now = (scenario == SwapScenario::Honest && t == params.alice_claim_time) ||
                               (scenario == SwapScenario::AliceClaimsLate && t == params.bob_expiry);
        if (bob_htlc && claim_now) {
            try {
                y.htlc_claim(*bob_htlc, alice, k, t);
                reveal_time = t;
                tr.phase = SwapPhase::Claimed;
                log(t, "Alice claims USDY, revealing k on Y");
            } catch (const InteropError& e) {
                log(t, std::string("Alice's claim fails: ") + e.what());
            }
        }
        // Bob watches chain Y for the published key.
        if (bob_htlc && !bob_key) {
            const auto& h = y.htlc(*bob_htlc);
            if (h.revealed_key) {
                bob_key = h.revealed_key;
                tr.bob_learned_key = true;
                log(t, "Bob reads k from Alice's claim");
            }
        }
        if (bob_key && reveal_time && t == *reveal_time + params.claim_latency &&
            x.htlc(alice_htlc).state == HtlcState::Active) {
            x.htlc_claim(alice_htlc, bob, *bob_key, t);
            log(t, "Bob claims USDX with k");
        }
        if (bob_htlc && t == params.bob_expiry && y.htlc(*bob_htlc).state == HtlcState::Active) {
            y.htlc_refund(*bob_htlc, t);
            log(t, "Bob's contract expires; USDY refunded to Bob");
        }
        if (t == params.alice_expiry && x.htlc(alice_htlc).state == HtlcState::Active) {
            x.htlc_refund(alice_htlc, t);
            log(t, "Alice's contract expires; USDX refunded to Alice");
        }
    }

    const bool x_claimed = x.htlc(alice_htlc).state == HtlcState::Claimed;
    const bool y_claimed = bob_htlc && y.htlc(*bob_htlc).state == HtlcState::Claimed;
    if (x_claimed && y_claimed)
        tr.outcome = SwapOutcome::Swapped;
    else if (!x_claimed && !y_claimed)
        tr.outcome = SwapOutcome::Refunded;
    else
        tr.outcome = SwapOutcome::Mixed;
    if (tr.outcome == SwapOutcome::Refunded) tr.phase = SwapPhase::Refunded;
    tr.chain_x = x.balances();
    tr.chain_y = y.balances();
    return tr;
}

namespace {

enum Contract : int { None = 0, Active = 1, Claimed = 2, Refunded = 3 };

struct ExState {
    std::uint64_t t = 0;
    int a = None;  // Alice's HTLC on X
    int b = None;  // Bob's HTLC on Y
    long long reveal = -1;
    auto key() const { return std::tuple(t, a, b, reveal); }
};

} // namespace

ExplorationResult explore_swap(const SwapParams& p) {
    ExplorationResult res;
    std::set<std::tuple<std::uint64_t, int, int, long long>> seen;
    std::vector<std::string> path;
    const std::uint64_t end = std::max(p.alice_expiry, p.bob_expiry) + 1;

    std::function<void(const ExState&)> dfs = [&](const ExState& s) {
        if (!seen.insert(s.key()).second) return;
        ++res.states;
        if (s.t == end) {
            // Everyone collects what expired.
            const int a = s.a == Active ? Refunded : s.a;
            const int b = s.b == Active ? Refunded : s.b;
            ++res.terminals;
            if (a == Claimed && b == Claimed)
                ++res.swapped;
            else if (a != Claimed && b != Claimed)
                ++res.refunded;
            else {
                ++res.mixed;
                if (res.counterexample.empty()) res.counterexample = path;
            }
            return;
        }
        auto go = [&](const std::string& what, ExState n) {
            path.push_back("t=" + std::to_string(s.t) + " " + what);
            dfs(n);
            path.pop_back();
        };
        // Alice: anything the contracts allow.
        if (s.a == None && s.t < p.alice_expiry) {
            auto n = s;
            n.a = Active;
            go("Alice funds X", n);
        }
        if (s.b == Active && s.t < p.bob_expiry) {
            auto n = s;
            n.b = Claimed;
            n.reveal = static_cast<long long>(s.t);
            go("Alice claims Y", n);
        }
        if (s.a == Active && s.t >= p.alice_expiry) {
            auto n = s;
            n.a = Refunded;
            go("Alice refunds X", n);
        }
        // Bob: funds only against Alice's live contract; claims once k is out.
        if (s.b == None && s.a == Active && s.t < p.bob_expiry) {
            auto n = s;
            n.b = Active;
            go("Bob funds Y", n);
        }
        const bool bob_can_claim = s.a == Active && s.reveal >= 0 && s.t < p.alice_expiry;
        if (bob_can_claim) {
            auto n = s;
            n.a = Claimed;
            go("Bob claims X", n);
        }
        if (s.b == Active && s.t >= p.bob_expiry) {
            auto n = s;
            n.b = Refunded;
            go("Bob refunds Y", n);
        }
        // Time moves on unless Bob would overrun his reaction latency.
        const bool overdue = bob_can_claim && s.t >= static_cast<std::uint64_t>(s.reveal) + p.claim_latency;
        if (!overdue) {
            auto n = s;
            ++n.t;
            go("tick", n);
        }
    };
    dfs(ExState{});
    return res;
}

} // namespace bcw::interop
