#include "bcw/account/account_chain.hpp"

#include "bcw/chain/pow.hpp"
#include "bcw/crypto/hash.hpp"
#include "bcw/crypto/merkle.hpp"

namespace bcw::account {

Bytes serialize_header(const AccountBlockHeader& h) {
    Writer w;
    w.i32(h.version).digest(h.prev_hash).digest(h.tx_root).digest(h.state_root);
    w.raw(ByteView(h.miner.payload.data(), h.miner.payload.size()));
    w.u32(h.timestamp).u32(h.difficulty_compact).u32(h.nonce);
    return std::move(w).take();
}

HashDigest block_id(const AccountBlockHeader& h) { return crypto::sha256d(serialize_header(h)); }

HashDigest compute_tx_root(const std::vector<AccountTx>& txs) {
    if (txs.empty()) return crypto::sha256d({});
    std::vector<HashDigest> hashes;
    hashes.reserve(txs.size());
    for (const auto& tx : txs) hashes.push_back(tx_hash(tx));
    return crypto::merkle_root_from_hashes(hashes);
}

std::string AccountBlockError::describe() const {
    static const char* names[] = {"", "ParentLink", "Timestamp", "ProofOfWork", "Replay", "StateRoot"};
    return std::string("step ") + std::to_string(static_cast<int>(step)) + " " + names[static_cast<int>(step)] +
           ": " + message;
}

AccountChain::AccountChain(AccountChainParams params, WorldState genesis_state) : params_(std::move(params)) {
    Entry g;
    g.block.header.timestamp = params_.genesis_time;
    g.block.header.difficulty_compact = params_.difficulty.encode();
    g.block.header.tx_root = compute_tx_root({});
    g.block.header.state_root = genesis_state.state_root();
    g.id = block_id(g.block.header);
    g.state = std::move(genesis_state);
    index_[g.id] = 0;
    entries_.push_back(std::move(g));
}

std::optional<AccountChain::Replay> AccountChain::replay(const WorldState& parent, const AccountBlock& b,
                                                         std::string* error) const {
    Replay r{parent, {}};
    for (std::size_t i = 0; i < b.transactions.size(); ++i) {
        try {
            auto res = state_transition(r.state, b.transactions[i], b.header.miner, params_.transition);
            r.state = std::move(res.state);
            r.receipts.push_back(std::move(res.receipt));
        } catch (const TransitionError& e) {
            if (error) *error = "tx " + std::to_string(i) + ": " + e.what();
            return std::nullopt;
        }
    }
    return r;
}

AccountBlock AccountChain::produce_block(const std::vector<AccountTx>& txs, const Address& miner,
                                         std::uint32_t timestamp,
                                         std::vector<std::pair<std::size_t, std::string>>* rejected) const {
    AccountBlock b;
    WorldState s = state();
    for (std::size_t i = 0; i < txs.size(); ++i) {
        try {
            s = state_transition(s, txs[i], miner, params_.transition).state;
            b.transactions.push_back(txs[i]);
        } catch (const TransitionError& e) {
            if (rejected) rejected->emplace_back(i, e.what());
        }
    }
    auto& h = b.header;
    h.prev_hash = tip_id();
    h.tx_root = compute_tx_root(b.transactions);
    h.state_root = s.state_root();
    h.miner = miner;
    h.timestamp = std::max(timestamp, tip().header.timestamp + 1);
    h.difficulty_compact = params_.difficulty.encode();
    const BigInt target = chain::target_from_difficulty(params_.difficulty, params_.pow_limit);
    for (std::uint64_t n = 0;; ++n) {
        if (n > 0xffffffffull) throw DomainError("MiningExhausted", "no header nonce meets the target");
        h.nonce = static_cast<std::uint32_t>(n);
        if (chain::meets_target(block_id(h), target)) break;
    }
    return b;
}

std::optional<AccountBlockError> AccountChain::validate(const AccountBlock& b, std::uint32_t now) const {
    return check(b, now, nullptr);
}

std::optional<AccountBlockError> AccountChain::check(const AccountBlock& b, std::uint32_t now, Replay* out) const {
    const auto& h = b.header;
    auto it = index_.find(h.prev_hash);
    if (it == index_.end()) return AccountBlockError{ValidationStep::ParentLink, "unknown parent " + h.prev_hash.hex()};
    const Entry& parent = entries_[it->second];

    if (h.timestamp <= parent.block.header.timestamp)
        return AccountBlockError{ValidationStep::Timestamp, "timestamp not after parent"};
    if (static_cast<std::uint64_t>(h.timestamp) >= static_cast<std::uint64_t>(now) + params_.max_future_seconds)
        return AccountBlockError{ValidationStep::Timestamp, "timestamp 15 minutes or more in the future"};

    if (h.difficulty_compact != params_.difficulty.encode())
        return AccountBlockError{ValidationStep::ProofOfWork, "unexpected difficulty"};
    if (!chain::meets_target(block_id(h), chain::target_from_difficulty(params_.difficulty, params_.pow_limit)))
        return AccountBlockError{ValidationStep::ProofOfWork, "block id not below target"};
    if (compute_tx_root(b.transactions) != h.tx_root)
        return AccountBlockError{ValidationStep::ProofOfWork, "transaction root mismatch"};

    std::string why;
    auto r = replay(parent.state, b, &why);
    if (!r) return AccountBlockError{ValidationStep::Replay, why};

    const HashDigest root = r->state.state_root();
    if (root != h.state_root)
        return AccountBlockError{ValidationStep::StateRoot, "replayed root " + root.hex() + " != " + h.state_root.hex()};
    if (out) *out = std::move(*r);
    return std::nullopt;
}

void AccountChain::append(const AccountBlock& b, std::uint32_t now) {
    if (b.header.prev_hash != tip_id()) throw DomainError("InvalidBlock", "block does not extend the tip");
    Replay r;
    if (auto err = check(b, now, &r)) throw DomainError("InvalidBlock", err->describe());
    Entry e{b, block_id(b.header), std::move(r.state), std::move(r.receipts)};
    index_[e.id] = entries_.size();
    entries_.push_back(std::move(e));
}

} // namespace bcw::account
