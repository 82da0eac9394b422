#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <string>
#include <vector>

#include "bcw/chain/chain.hpp"
#include "bcw/crypto/ecdsa.hpp"
#include "bcw/netsim/config.hpp"
#include "bcw/netsim/topology.hpp"

namespace bcw::netsim {

/// Every block ever created in a run, valid or not, with the UTXO set after it.
struct BlockRecord {
    chain::Block block;
    HashDigest id;
    int parent = -1;
    std::uint64_t height = 0;
    /// Creating node; -1 for genesis and injected blocks.
    int miner = -1;
    int round = 0;
    bool valid = false;
    std::optional<chain::BlockError> error;
    ledger::UtxoSet utxos;
};

struct TxRecord {
    ledger::UtxoTransaction tx;
    HashDigest id;
    /// Signature and ownership checks done once against the issuer's view.
    bool well_formed = false;
    std::size_t size = 0;
    ledger::Amount fee = 0;
};

struct NodeState {
    int id = 0;
    Strategy strategy = Strategy::Honest;
    std::vector<int> neighbors;
    int tip = 0;
    int tip_round = -1;
    /// Per block index: 0 unknown, 1 waiting for its parent, 2 processed.
    std::vector<std::uint8_t> known;
    /// Parent index -> (block, sender) pairs waiting for that parent.
    std::map<int, std::vector<std::pair<int, int>>> orphans;
    std::vector<bool> seen_tx;
    /// Tx indices, insertion ordered; block building sorts by fee rate.
    std::vector<int> mempool;
    crypto::KeyPair key;
    crypto::Address address;
};

/// Shared state of all selfish nodes: they pool hashrate and one private branch.
struct SelfishPool {
    int private_tip = 0;
    std::vector<int> withheld;
    /// Highest honest block the pool has seen.
    std::uint64_t public_height = 0;
    /// The pool's branch is published and level with the honest one.
    bool racing = false;
    std::uint64_t releases = 0;
    std::uint64_t abandoned = 0;
};

struct SimMetrics {
    int n = 0;
    int rounds = 0;
    std::uint64_t blocks_created = 0;
    std::uint64_t consensus_height = 0;
    /// Honest-authored share of the common honest prefix; 1 when it is empty.
    double chain_quality = 1.0;
    /// Blocks on the best honest chain over all blocks created.
    double efficiency_observed = 1.0;
    /// Per node share of consensus-chain blocks.
    std::vector<double> revenue;
    double selfish_revenue_share = 0.0;
    /// Selfish nodes over mining (non-silent) nodes.
    double selfish_hashrate_share = 0.0;
    /// Blocks created but not on the best honest chain.
    std::uint64_t fork_count = 0;
    /// Largest distance from an honest tip down to the common honest prefix.
    std::uint64_t consistency_depth = 0;
    bool honest_chains_identical = true;
    std::uint64_t messages_sent = 0;
    std::uint64_t messages_delivered = 0;
    std::uint64_t messages_in_flight = 0;
    std::uint64_t txs_created = 0;
    std::uint64_t txs_confirmed = 0;

    std::string to_json() const;
    static std::string csv_header();
    std::string csv_row() const;
};

struct SimResult {
    SimMetrics metrics;
    /// Block ids from genesis to each node's tip (the pool's branch for selfish nodes).
    std::vector<std::vector<HashDigest>> final_chains;
    std::vector<std::string> trace;
};

class Simulator {
public:
    explicit Simulator(SimConfig config);

    /// One round: payments, mining, publication, delivery and handlers.
    void step();
    void run();
    bool done() const { return round_ >= config_.rounds; }
    int round() const { return round_; }

    /// Has `from` broadcast an arbitrary block as if it had made it.
    void inject(int from, const chain::Block& b);

    const SimConfig& config() const { return config_; }
    const std::vector<NodeState>& nodes() const { return nodes_; }
    const std::vector<BlockRecord>& tree() const { return tree_; }
    const SelfishPool& pool() const { return pool_; }
    const chain::ChainParams& params() const { return params_; }

    /// Tree indices from genesis to the node's current tip.
    std::vector<int> chain_of(int node) const;
    std::vector<chain::Block> blocks_of(int node) const;
    SimMetrics metrics() const;
    SimResult result() const;

private:
    struct Message {
        int deliver_round;
        std::uint64_t seq;
        int from;
        int to;
        bool is_tx;
        int index;
        bool operator>(const Message& o) const {
            return deliver_round != o.deliver_round ? deliver_round > o.deliver_round : seq > o.seq;
        }
    };

    double uniform();
    int mining_tip(int v) const;
    int create_block(int v, int parent);
    int record_block(chain::Block b, int miner);
    void send(int from, int to, bool is_tx, int index);
    void broadcast(int from, bool is_tx, int index, int except = -1);
    void deliver(const Message& m);
    void receive_block(int v, int idx, int from);
    void accept_block(int v, int idx, int from);
    void on_honest_block_for_pool(int idx);
    void release_withheld(std::uint64_t up_to_height);
    void adopt(int v, int idx);
    void receive_tx(int v, int idx, int from);
    void issue_payment();
    ledger::UtxoSet pending_state(const NodeState& node) const;
    void prune_mempool(NodeState& node);
    std::vector<ledger::UtxoTransaction> select_txs(const NodeState& node, int parent) const;
    void grow_known();
    void check_safety() const;
    void log(const std::string& line);
    int best_honest_tip() const;
    chain::TipContext context_of(int idx) const;
    bool in_pool(int node) const;

    SimConfig config_;
    chain::ChainParams params_;
    std::vector<NodeState> nodes_;
    std::vector<BlockRecord> tree_;
    std::vector<TxRecord> txs_;
    SelfishPool pool_;
    std::mt19937_64 rng_;
    std::priority_queue<Message, std::vector<Message>, std::greater<>> queue_;
    std::uint64_t msg_seq_ = 0;
    std::uint64_t sent_ = 0;
    std::uint64_t delivered_ = 0;
    int round_ = 0;
    std::vector<std::string> trace_;
    std::map<HashDigest, int> by_id_;
};

/// Runs a fresh simulator to completion.
SimResult run(const SimConfig& config);

/// Honest-authored fraction of `miners` (one entry per non-genesis block);
/// 1 for an empty chain. Negative miner ids count as not honest.
double measure_chain_quality(const std::vector<int>& miners, const std::vector<Strategy>& labels);

} // namespace bcw::netsim
