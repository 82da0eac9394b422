#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "bcw/account/transition.hpp"
#include "bcw/chain/difficulty.hpp"

namespace bcw::account {

struct AccountBlockHeader {
    std::int32_t version = 1;
    HashDigest prev_hash;
    HashDigest tx_root;
    HashDigest state_root;
    Address miner;
    std::uint32_t timestamp = 0;
    std::uint32_t difficulty_compact = 0;
    std::uint32_t nonce = 0;

    bool operator==(const AccountBlockHeader&) const = default;
};

/// version | prev | tx_root | state_root | miner[20] | timestamp | difficulty | nonce (132 bytes)
Bytes serialize_header(const AccountBlockHeader& h);
HashDigest block_id(const AccountBlockHeader& h);

struct AccountBlock {
    AccountBlockHeader header;
    std::vector<AccountTx> transactions;
};

HashDigest compute_tx_root(const std::vector<AccountTx>& txs);

struct AccountChainParams {
    BigInt pow_limit = BigInt(1) << 256;
    chain::Difficulty difficulty;
    std::uint32_t max_future_seconds = 15 * 60;
    std::uint32_t genesis_time = 1600000000;
    TransitionConfig transition;
};

/// Which of the five checks rejected a block.
enum class ValidationStep { ParentLink = 1, Timestamp = 2, ProofOfWork = 3, Replay = 4, StateRoot = 5 };

struct AccountBlockError {
    ValidationStep step;
    std::string message;

    std::string describe() const;
};

class AccountChain {
public:
    AccountChain(AccountChainParams params, WorldState genesis_state);

    const AccountChainParams& params() const { return params_; }
    std::size_t height() const { return entries_.size() - 1; }
    const HashDigest& tip_id() const { return entries_.back().id; }
    const AccountBlock& tip() const { return entries_.back().block; }
    const WorldState& state() const { return entries_.back().state; }
    const std::vector<Receipt>& receipts(std::size_t height) const { return entries_.at(height).receipts; }
    const AccountBlock& block(std::size_t height) const { return entries_.at(height).block; }

    /// Replays `txs` on the tip state, keeping those that pass steps 1-2 (with
    /// success or failure receipts), and mines the header. Dropped
    /// transactions are reported through `rejected` when given.
    AccountBlock produce_block(const std::vector<AccountTx>& txs, const Address& miner, std::uint32_t timestamp,
                               std::vector<std::pair<std::size_t, std::string>>* rejected = nullptr) const;

    /// Parent link, timestamp window against `now`, PoW and tx root, replay,
    /// and the final state root.
    std::optional<AccountBlockError> validate(const AccountBlock& b, std::uint32_t now) const;

    /// Validates and appends; throws DomainError("InvalidBlock").
    void append(const AccountBlock& b, std::uint32_t now);

private:
    struct Entry {
        AccountBlock block;
        HashDigest id;
        WorldState state;
        std::vector<Receipt> receipts;
    };

    struct Replay {
        WorldState state;
        std::vector<Receipt> receipts;
    };
    std::optional<Replay> replay(const WorldState& parent, const AccountBlock& b, std::string* error) const;
    std::optional<AccountBlockError> check(const AccountBlock& b, std::uint32_t now, Replay* out) const;

    AccountChainParams params_;
    std::vector<Entry> entries_;
    std::map<HashDigest, std::size_t> index_;
};

} // namespace bcw::account
