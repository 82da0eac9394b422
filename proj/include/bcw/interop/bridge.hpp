#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bcw/interop/htlc.hpp"

namespace bcw::interop {

enum class BridgeMode { Pooled, BurnMint };
enum class ChainSide { X, Y };

std::string_view to_string(BridgeMode m);
std::string_view to_string(ChainSide s);

struct BridgeConfig {
    BridgeMode mode = BridgeMode::Pooled;
    /// Reserve n_X; unused in burn-mint mode where X is the operator's chain.
    Amount pool_x = 100;
    Amount pool_y = 100;
};

enum class TransferStatus { Pending, Completed, Refunded };
std::string_view to_string(TransferStatus s);

/// The operator's record of every cross-chain leg, kept so a crash between
/// the source and destination legs can be replayed on restart.
struct JournalEntry {
    std::uint64_t id = 0;
    ChainSide from = ChainSide::X;
    Party sender;
    Party receiver;
    Amount amount = 0;
    TransferStatus status = TransferStatus::Pending;
};

/// Two token chains, X (USDX) and Y (USDY), exchanged 1:1 by an operator.
/// Pools are ordinary accounts named LP_X and LP_Y.
class Bridge {
public:
    static constexpr std::string_view kPoolX = "LP_X";
    static constexpr std::string_view kPoolY = "LP_Y";

    explicit Bridge(BridgeConfig config = {});

    BridgeMode mode() const { return config_.mode; }
    TokenChain& chain(ChainSide s) { return s == ChainSide::X ? x_ : y_; }
    const TokenChain& chain(ChainSide s) const { return s == ChainSide::X ? x_ : y_; }
    Amount pool_x() const { return x_.balance(std::string(kPoolX)); }
    Amount pool_y() const { return y_.balance(std::string(kPoolY)); }
    /// Wrapped USDX in circulation (burn-mint mode).
    Amount minted_x() const { return minted_x_; }

    void fund(ChainSide side, const Party& p, Amount amount);

    /// Pooled mode: sender pays into the source pool, the operator pays the
    /// receiver from the destination pool. If that pool is short the deposit
    /// is refunded and InteropError(InsufficientReserve) thrown. While the
    /// operator is down the destination leg waits in the journal.
    std::uint64_t transfer(ChainSide from, const Party& sender, const Party& receiver, Amount amount);

    /// Burn-mint mode, Y to X: pay into LP_Y, mint on X.
    std::uint64_t wrap(const Party& sender, const Party& receiver, Amount amount);
    /// Burn-mint mode, X to Y: burn on X, pay out of LP_Y (refund by re-mint
    /// when LP_Y is short, then InteropError(InsufficientReserve)).
    std::uint64_t unwrap(const Party& sender, const Party& receiver, Amount amount);

    void crash() { up_ = false; }
    /// Replays pending journal entries; returns the ids handled.
    std::vector<std::uint64_t> restart();
    bool operator_up() const { return up_; }

    const std::vector<JournalEntry>& journal() const { return journal_; }
    const std::vector<std::string>& events() const { return events_; }

    /// Pooled: everything on X plus everything on Y never changes.
    bool pooled_invariant() const;
    /// Burn-mint: minted USDX equals the net USDY taken into LP_Y.
    bool burn_mint_invariant() const;

private:
    std::uint64_t begin(ChainSide from, const Party& sender, const Party& receiver, Amount amount);
    /// Destination leg; false when the reserve is short (and refunded).
    bool complete(JournalEntry& e);

    BridgeConfig config_;
    TokenChain x_{"X", "USDX"};
    TokenChain y_{"Y", "USDY"};
    Amount initial_total_ = 0;
    Amount minted_x_ = 0;
    bool up_ = true;
    std::vector<JournalEntry> journal_;
    std::vector<std::string> events_;
};

struct BridgeReport {
    std::vector<std::string> events;
    std::map<Party, Amount> chain_x;
    std::map<Party, Amount> chain_y;
    bool invariant_holds = true;
    std::string to_json() const;
};

/// {"mode": "pooled"|"burn_mint", "pool_x": n, "pool_y": n,
///  "fund": {"X": {"Alice": 50}, "Y": {...}},
///  "actions": [{"action": "transfer", "from": "X", "sender": ..., "receiver": ..., "amount": n},
///              {"action": "wrap"|"unwrap", "sender": ..., "receiver": ..., "amount": n},
///              {"action": "crash"}, {"action": "restart"}]}
/// Rejected actions are logged. Throws InteropError(BadScript).
BridgeReport run_bridge_script(std::string_view json_text);

} // namespace bcw::interop
