#include "bcw/netsim/simulator.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "bcw/crypto/hash.hpp"
#include "bcw/ledger/wallet.hpp"

namespace bcw::netsim {

namespace {

constexpr ledger::Amount kPaymentFee = 1000;

bool inputs_present(const ledger::UtxoTransaction& tx, const ledger::UtxoSet& s) {
    return std::all_of(tx.inputs.begin(), tx.inputs.end(), [&](const auto& in) { return s.contains(in.outpoint); });
}

std::string short_id(const HashDigest& h) { return h.hex().substr(0, 8); }

} // namespace

Simulator::Simulator(SimConfig config) : config_(std::move(config)), params_(chain::ChainParams::sim()) {
    config_.validate();
    // Difficulty stays at 1 so the Bernoulli abstraction never fails PoW.
    params_.epoch_length = 0;
    rng_.seed(config_.seed);

    const auto adj = build_topology(config_.topology, config_.n, config_.seed);
    const auto strategies = config_.resolved_strategies();

    BlockRecord g;
    g.block = chain::genesis_block(params_);
    g.id = chain::block_id(g.block.header);
    g.valid = true;
    ledger::apply_unchecked(g.block.transactions.front(), g.utxos);
    by_id_[g.id] = 0;
    tree_.push_back(std::move(g));

    nodes_.resize(static_cast<std::size_t>(config_.n));
    for (int v = 0; v < config_.n; ++v) {
        auto& node = nodes_[static_cast<std::size_t>(v)];
        node.id = v;
        node.strategy = strategies[static_cast<std::size_t>(v)];
        node.neighbors = adj[static_cast<std::size_t>(v)];
        node.known.assign(1, 2);
        const std::string label = "bcw-sim-node-" + std::to_string(v);
        if (config_.tx_rate > 0.0) {
            // Keys only matter when nodes pay each other.
            node.key = crypto::keypair_from_label(label);
            node.address = ledger::address_of(node.key);
        } else {
            const auto h = crypto::hash160(as_bytes(label));
            node.address = crypto::Address::from_payload(ByteView(h.data(), h.size()));
        }
    }
}

double Simulator::uniform() { return std::generate_canonical<double, 53>(rng_); }

bool Simulator::in_pool(int node) const {
    return node >= 0 && nodes_[static_cast<std::size_t>(node)].strategy == Strategy::Selfish;
}

int Simulator::mining_tip(int v) const {
    const auto& node = nodes_[static_cast<std::size_t>(v)];
    return node.strategy == Strategy::Selfish ? pool_.private_tip : node.tip;
}

chain::TipContext Simulator::context_of(int idx) const {
    const auto& r = tree_[static_cast<std::size_t>(idx)];
    return {&params_, r.id, r.block.header, r.height, &r.utxos,
            chain::Difficulty::decode(r.block.header.difficulty_compact)};
}

void Simulator::log(const std::string& line) {
    if (config_.trace) trace_.push_back("r" + std::to_string(round_) + " " + line);
}

void Simulator::grow_known() {
    for (auto& node : nodes_) node.known.resize(tree_.size(), 0);
}

int Simulator::record_block(chain::Block b, int miner) {
    BlockRecord rec;
    rec.id = chain::block_id(b.header);
    if (auto it = by_id_.find(rec.id); it != by_id_.end()) return it->second;
    rec.miner = miner;
    rec.round = round_;
    if (auto it = by_id_.find(b.header.prev_hash); it != by_id_.end()) {
        rec.parent = it->second;
        const auto& parent = tree_[static_cast<std::size_t>(rec.parent)];
        rec.height = parent.height + 1;
        if (!parent.valid) {
            rec.error = chain::BlockError{chain::BlockErrc::BadPrevHash, 0, std::nullopt, "parent is invalid"};
        } else {
            rec.error = chain::validate_block(b, context_of(rec.parent), &rec.utxos);
        }
        rec.valid = !rec.error.has_value();
    } else {
        rec.error = chain::BlockError{chain::BlockErrc::BadPrevHash, 0, std::nullopt, "unknown parent"};
    }
    rec.block = std::move(b);
    const int idx = static_cast<int>(tree_.size());
    by_id_[rec.id] = idx;
    log("block " + short_id(rec.id) + " h=" + std::to_string(rec.height) + " miner=" + std::to_string(miner) +
        (rec.valid ? "" : " invalid"));
    tree_.push_back(std::move(rec));
    grow_known();
    return idx;
}

std::vector<ledger::UtxoTransaction> Simulator::select_txs(const NodeState& node, int parent) const {
    std::vector<int> order = node.mempool;
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const auto& x = txs_[static_cast<std::size_t>(a)];
        const auto& y = txs_[static_cast<std::size_t>(b)];
        // fee/size comparison without division
        return static_cast<double>(x.fee) * static_cast<double>(y.size) >
               static_cast<double>(y.fee) * static_cast<double>(x.size);
    });
    ledger::UtxoSet running = tree_[static_cast<std::size_t>(parent)].utxos;
    std::vector<ledger::UtxoTransaction> out;
    for (int i : order) {
        if (out.size() >= config_.max_block_txs) break;
        const auto& rec = txs_[static_cast<std::size_t>(i)];
        if (!rec.well_formed || !inputs_present(rec.tx, running)) continue;
        ledger::apply_unchecked(rec.tx, running);
        out.push_back(rec.tx);
    }
    return out;
}

int Simulator::create_block(int v, int parent) {
    const auto& node = nodes_[static_cast<std::size_t>(v)];
    const auto ts = params_.genesis_time + static_cast<std::uint32_t>(round_) + 1;
    chain::Block b;
    try {
        b = chain::make_block_template(context_of(parent), node.address, select_txs(node, parent), ts);
    } catch (const chain::ChainError&) {
        b = chain::make_block_template(context_of(parent), node.address, {}, ts);
    }
    // Distinct coinbases keep sibling blocks of the same miner apart.
    b.transactions.front().coinbase_nonce = tree_.size();
    b.header.merkle_root = chain::compute_merkle_root(b.transactions);
    return record_block(std::move(b), v);
}

void Simulator::send(int from, int to, bool is_tx, int index) {
    queue_.push({round_ + config_.delta, msg_seq_++, from, to, is_tx, index});
    ++sent_;
}

void Simulator::broadcast(int from, bool is_tx, int index, int except) {
    for (int u : nodes_[static_cast<std::size_t>(from)].neighbors)
        if (u != except) send(from, u, is_tx, index);
}

void Simulator::deliver(const Message& m) {
    ++delivered_;
    if (m.is_tx)
        receive_tx(m.to, m.index, m.from);
    else
        receive_block(m.to, m.index, m.from);
}

void Simulator::receive_block(int v, int idx, int from) {
    auto& node = nodes_[static_cast<std::size_t>(v)];
    if (node.known[static_cast<std::size_t>(idx)] != 0) return;
    const int parent = tree_[static_cast<std::size_t>(idx)].parent;
    if (parent >= 0 && node.known[static_cast<std::size_t>(parent)] != 2) {
        node.known[static_cast<std::size_t>(idx)] = 1;
        node.orphans[parent].emplace_back(idx, from);
        return;
    }
    accept_block(v, idx, from);
}

void Simulator::accept_block(int v, int idx, int from) {
    auto& node = nodes_[static_cast<std::size_t>(v)];
    node.known[static_cast<std::size_t>(idx)] = 2;
    const auto& rec = tree_[static_cast<std::size_t>(idx)];
    if (!rec.valid) {
        log("node " + std::to_string(v) + " rejects " + short_id(rec.id));
    } else if (node.strategy == Strategy::Selfish) {
        // Observed but never relayed.
        if (!in_pool(rec.miner)) on_honest_block_for_pool(idx);
    } else {
        if (node.strategy == Strategy::Honest) broadcast(v, false, idx, from);
        const auto& tip = tree_[static_cast<std::size_t>(node.tip)];
        const bool longer = rec.height > tip.height;
        // Same-round arrivals at equal height: the earlier-created block wins.
        const bool tie_break = rec.height == tip.height && node.tip_round == round_ && idx < node.tip;
        if (longer || tie_break) adopt(v, idx);
    }
    auto it = node.orphans.find(idx);
    if (it == node.orphans.end()) return;
    auto waiting = std::move(it->second);
    node.orphans.erase(it);
    for (auto [child, sender] : waiting) accept_block(v, child, sender);
}

void Simulator::adopt(int v, int idx) {
    auto& node = nodes_[static_cast<std::size_t>(v)];
    node.tip = idx;
    node.tip_round = round_;
    prune_mempool(node);
}

void Simulator::release_withheld(std::uint64_t up_to_height) {
    std::vector<int> keep;
    std::size_t sent = 0;
    for (int w : pool_.withheld) {
        if (tree_[static_cast<std::size_t>(w)].height > up_to_height) {
            keep.push_back(w);
            continue;
        }
        for (const auto& member : nodes_)
            if (member.strategy == Strategy::Selfish) broadcast(member.id, false, w);
        ++sent;
    }
    if (sent == 0) return;
    ++pool_.releases;
    log("pool releases " + std::to_string(sent) + " blocks");
    pool_.withheld = std::move(keep);
}

void Simulator::on_honest_block_for_pool(int idx) {
    const auto h = tree_[static_cast<std::size_t>(idx)].height;
    // Every pool member sees the same block; react once per new height.
    if (h <= pool_.public_height) return;
    pool_.public_height = h;
    const auto priv_h = tree_[static_cast<std::size_t>(pool_.private_tip)].height;
    pool_.racing = false;
    if (h > priv_h) {
        if (!pool_.withheld.empty()) {
            ++pool_.abandoned;
            log("pool abandons " + std::to_string(pool_.withheld.size()) + " blocks");
            pool_.withheld.clear();
        }
        pool_.private_tip = idx;
    } else if (h == priv_h) {
        // Lead of one wiped out: publish and race.
        release_withheld(priv_h);
        pool_.racing = true;
    } else if (h + 1 == priv_h) {
        release_withheld(priv_h);  // strictly longer, honest nodes switch
    } else {
        release_withheld(h);  // match the honest height, keep the lead hidden
    }
}

ledger::UtxoSet Simulator::pending_state(const NodeState& node) const {
    ledger::UtxoSet s = tree_[static_cast<std::size_t>(mining_tip(node.id))].utxos;
    for (int i : node.mempool) {
        const auto& tx = txs_[static_cast<std::size_t>(i)].tx;
        if (inputs_present(tx, s)) ledger::apply_unchecked(tx, s);
    }
    return s;
}

void Simulator::prune_mempool(NodeState& node) {
    if (node.mempool.empty()) return;
    ledger::UtxoSet s = tree_[static_cast<std::size_t>(mining_tip(node.id))].utxos;
    std::vector<int> keep;
    for (int i : node.mempool) {
        const auto& tx = txs_[static_cast<std::size_t>(i)].tx;
        if (!inputs_present(tx, s)) continue;
        ledger::apply_unchecked(tx, s);
        keep.push_back(i);
    }
    node.mempool = std::move(keep);
}

void Simulator::receive_tx(int v, int idx, int from) {
    auto& node = nodes_[static_cast<std::size_t>(v)];
    if (node.seen_tx[static_cast<std::size_t>(idx)]) return;
    node.seen_tx[static_cast<std::size_t>(idx)] = true;
    if (node.strategy == Strategy::Silent) return;
    const auto& rec = txs_[static_cast<std::size_t>(idx)];
    if (!rec.well_formed || !inputs_present(rec.tx, pending_state(node))) return;
    node.mempool.push_back(idx);
    broadcast(v, true, idx, from);
}

void Simulator::issue_payment() {
    std::vector<int> honest;
    for (const auto& node : nodes_)
        if (node.strategy == Strategy::Honest) honest.push_back(node.id);
    if (honest.empty()) return;
    const int v = honest[std::min(honest.size() - 1, static_cast<std::size_t>(uniform() * honest.size()))];
    const int dest = config_.n == 1 ? v : (v + 1 + static_cast<int>(uniform() * (config_.n - 1))) % config_.n;
    auto& node = nodes_[static_cast<std::size_t>(v)];
    const auto state = pending_state(node);
    TxRecord rec;
    try {
        rec.tx = ledger::build_transfer(node.key, {{nodes_[static_cast<std::size_t>(dest)].address, ledger::kCoin}},
                                        state, kPaymentFee);
    } catch (const ledger::LedgerError&) {
        return;  // nothing to spend yet
    }
    rec.id = ledger::txid(rec.tx);
    rec.well_formed = !ledger::validate_tx(rec.tx, state).has_value();
    rec.size = ledger::serialize(rec.tx).size();
    rec.fee = kPaymentFee;
    const int idx = static_cast<int>(txs_.size());
    txs_.push_back(std::move(rec));
    for (auto& n : nodes_) n.seen_tx.push_back(false);
    node.seen_tx[static_cast<std::size_t>(idx)] = true;
    node.mempool.push_back(idx);
    log("node " + std::to_string(v) + " pays node " + std::to_string(dest));
    broadcast(v, true, idx);
}

void Simulator::check_safety() const {
    for (const auto& node : nodes_)
        if (node.strategy == Strategy::Honest && !tree_[static_cast<std::size_t>(node.tip)].valid)
            throw SimError(SimErrc::SafetyViolation, "honest node " + std::to_string(node.id) + " adopted an invalid block");
}

void Simulator::step() {
    if (done()) return;
    if (config_.tx_rate > 0.0 && uniform() < config_.tx_rate) issue_payment();

    for (int v = 0; v < config_.n; ++v) {
        // One draw per node per round keeps streams aligned across strategies.
        const bool success = uniform() < config_.p;
        const auto strategy = nodes_[static_cast<std::size_t>(v)].strategy;
        if (!success || strategy == Strategy::Silent) continue;
        const int idx = create_block(v, mining_tip(v));
        if (strategy == Strategy::Honest) {
            nodes_[static_cast<std::size_t>(v)].known[static_cast<std::size_t>(idx)] = 2;
            adopt(v, idx);
            broadcast(v, false, idx);
        } else {
            for (auto& member : nodes_)
                if (member.strategy == Strategy::Selfish) member.known[static_cast<std::size_t>(idx)] = 2;
            pool_.withheld.push_back(idx);
            pool_.private_tip = idx;
            if (pool_.racing) {
                // Won the race: the branch is now longer than any honest one.
                pool_.racing = false;
                release_withheld(tree_[static_cast<std::size_t>(idx)].height);
            }
        }
    }

    while (!queue_.empty() && queue_.top().deliver_round <= round_) {
        const Message m = queue_.top();
        queue_.pop();
        deliver(m);
    }
    check_safety();
    ++round_;
}

void Simulator::run() {
    while (!done()) step();
}

void Simulator::inject(int from, const chain::Block& b) {
    if (from < 0 || from >= config_.n) throw SimError(SimErrc::InvalidConfig, "inject: node out of range");
    const int idx = record_block(b, -1);
    nodes_[static_cast<std::size_t>(from)].known[static_cast<std::size_t>(idx)] = 2;
    broadcast(from, false, idx);
}

std::vector<int> Simulator::chain_of(int node) const {
    std::vector<int> out;
    for (int i = mining_tip(node); i >= 0; i = tree_[static_cast<std::size_t>(i)].parent) out.push_back(i);
    std::reverse(out.begin(), out.end());
    return out;
}

std::vector<chain::Block> Simulator::blocks_of(int node) const {
    std::vector<chain::Block> out;
    for (int i : chain_of(node)) out.push_back(tree_[static_cast<std::size_t>(i)].block);
    return out;
}

int Simulator::best_honest_tip() const {
    int best = -1;
    for (const auto& node : nodes_) {
        if (node.strategy != Strategy::Honest) continue;
        const int t = node.tip;
        if (best < 0 || tree_[static_cast<std::size_t>(t)].height > tree_[static_cast<std::size_t>(best)].height ||
            (tree_[static_cast<std::size_t>(t)].height == tree_[static_cast<std::size_t>(best)].height && t < best))
            best = t;
    }
    return best < 0 ? mining_tip(0) : best;
}

double measure_chain_quality(const std::vector<int>& miners, const std::vector<Strategy>& labels) {
    if (miners.empty()) return 1.0;
    std::size_t honest = 0;
    for (int m : miners)
        if (m >= 0 && static_cast<std::size_t>(m) < labels.size() && labels[static_cast<std::size_t>(m)] == Strategy::Honest)
            ++honest;
    return static_cast<double>(honest) / static_cast<double>(miners.size());
}

SimMetrics Simulator::metrics() const {
    SimMetrics m;
    m.n = config_.n;
    m.rounds = round_;
    m.blocks_created = tree_.size() - 1;

    std::vector<int> group;
    std::vector<Strategy> labels;
    for (const auto& node : nodes_) {
        labels.push_back(node.strategy);
        if (node.strategy == Strategy::Honest) group.push_back(node.id);
    }
    if (group.empty())
        for (const auto& node : nodes_) group.push_back(node.id);

    std::vector<std::vector<int>> chains;
    for (int v : group) chains.push_back(chain_of(v));
    std::size_t prefix = 0;
    while (std::all_of(chains.begin(), chains.end(), [&](const auto& c) {
        return prefix < c.size() && c[prefix] == chains.front()[prefix];
    }))
        ++prefix;
    m.consensus_height = prefix - 1;

    std::vector<int> miners;
    for (std::size_t i = 1; i < prefix; ++i) miners.push_back(tree_[static_cast<std::size_t>(chains.front()[i])].miner);
    m.chain_quality = measure_chain_quality(miners, labels);

    m.revenue.assign(static_cast<std::size_t>(config_.n), 0.0);
    for (int who : miners)
        if (who >= 0) m.revenue[static_cast<std::size_t>(who)] += 1.0;
    for (auto& r : m.revenue) r = miners.empty() ? 0.0 : r / static_cast<double>(miners.size());

    std::size_t selfish = 0, mining = 0;
    for (const auto& node : nodes_) {
        if (node.strategy == Strategy::Selfish) {
            ++selfish;
            m.selfish_revenue_share += m.revenue[static_cast<std::size_t>(node.id)];
        }
        if (node.strategy != Strategy::Silent) ++mining;
    }
    m.selfish_hashrate_share = mining ? static_cast<double>(selfish) / static_cast<double>(mining) : 0.0;

    const int best = best_honest_tip();
    const auto main_len = tree_[static_cast<std::size_t>(best)].height;
    m.efficiency_observed =
        m.blocks_created ? static_cast<double>(main_len) / static_cast<double>(m.blocks_created) : 1.0;
    m.fork_count = m.blocks_created - main_len;

    for (const auto& c : chains) {
        m.consistency_depth = std::max<std::uint64_t>(m.consistency_depth, c.size() - prefix);
        m.honest_chains_identical = m.honest_chains_identical && c == chains.front();
    }

    m.messages_sent = sent_;
    m.messages_delivered = delivered_;
    m.messages_in_flight = queue_.size();
    m.txs_created = txs_.size();
    for (int i = best; i > 0; i = tree_[static_cast<std::size_t>(i)].parent)
        m.txs_confirmed += tree_[static_cast<std::size_t>(i)].block.transactions.size() - 1;
    return m;
}

SimResult Simulator::result() const {
    SimResult r;
    r.metrics = metrics();
    for (int v = 0; v < config_.n; ++v) {
        std::vector<HashDigest> ids;
        for (int i : chain_of(v)) ids.push_back(tree_[static_cast<std::size_t>(i)].id);
        r.final_chains.push_back(std::move(ids));
    }
    r.trace = trace_;
    return r;
}

SimResult run(const SimConfig& config) {
    Simulator sim(config);
    sim.run();
    return sim.result();
}

std::string SimMetrics::to_json() const {
    nlohmann::ordered_json j;
    j["n"] = n;
    j["rounds"] = rounds;
    j["blocks_created"] = blocks_created;
    j["consensus_height"] = consensus_height;
    j["chain_quality"] = chain_quality;
    j["efficiency_observed"] = efficiency_observed;
    j["revenue"] = revenue;
    j["selfish_revenue_share"] = selfish_revenue_share;
    j["selfish_hashrate_share"] = selfish_hashrate_share;
    j["fork_count"] = fork_count;
    j["consistency_depth"] = consistency_depth;
    j["honest_chains_identical"] = honest_chains_identical;
    j["messages_sent"] = messages_sent;
    j["messages_delivered"] = messages_delivered;
    j["messages_in_flight"] = messages_in_flight;
    j["txs_created"] = txs_created;
    j["txs_confirmed"] = txs_confirmed;
    return j.dump(2);
}

std::string SimMetrics::csv_header() {
    return "n,rounds,blocks_created,consensus_height,chain_quality,efficiency_observed,selfish_revenue_share,"
           "selfish_hashrate_share,fork_count,consistency_depth,honest_chains_identical,messages_sent,"
           "messages_delivered,txs_created,txs_confirmed";
}

std::string SimMetrics::csv_row() const {
    std::ostringstream o;
    o.precision(10);
    o << n << ',' << rounds << ',' << blocks_created << ',' << consensus_height << ',' << chain_quality << ','
      << efficiency_observed << ',' << selfish_revenue_share << ',' << selfish_hashrate_share << ',' << fork_count
      << ',' << consistency_depth << ',' << (honest_chains_identical ? 1 : 0) << ',' << messages_sent << ','
      << messages_delivered << ',' << txs_created << ',' << txs_confirmed;
    return o.str();
}

} // namespace bcw::netsim
