#include "bcw/chain/chain.hpp"

#include "bcw/chain/pow.hpp"
#include "bcw/crypto/hash.hpp"
#include "bcw/ledger/wallet.hpp"

namespace bcw::chain {

namespace {

BlockError block_err(BlockErrc code, std::string msg) { return {code, std::nullopt, std::nullopt, std::move(msg)}; }

} // namespace

ChainParams ChainParams::mainnet() {
    ChainParams p;
    p.name = "mainnet";
    p.pow_limit = default_pow_limit();
    return p;
}

ChainParams ChainParams::regtest() {
    ChainParams p;
    p.name = "regtest";
    p.pow_limit = BigInt(1) << 252;
    return p;
}

ChainParams ChainParams::sim() {
    ChainParams p;
    p.name = "sim";
    p.pow_limit = BigInt(1) << 256;
    return p;
}

ChainParams ChainParams::by_name(std::string_view name) {
    if (name == "mainnet") return mainnet();
    if (name == "regtest") return regtest();
    if (name == "sim") return sim();
    throw DomainError("UnknownParams", "unknown chain params '" + std::string(name) + "'");
}

Block genesis_block(const ChainParams& params) {
    const auto burn = crypto::hash160(as_bytes("bcw genesis"));
    Block g;
    g.transactions.push_back(
        ledger::build_coinbase(crypto::Address::from_payload(ByteView(burn.data(), burn.size())), 0, 0, 0));
    g.header.version = 1;
    g.header.merkle_root = compute_merkle_root(g.transactions);
    g.header.timestamp = params.genesis_time;
    g.header.difficulty_compact = params.initial_difficulty.encode();
    return g;
}

std::string BlockError::describe() const {
    std::string s(to_string(code));
    if (tx_index) s += " (tx " + std::to_string(*tx_index) + ")";
    if (!message.empty()) s += ": " + message;
    if (cause) s += ": " + cause->describe();
    return s;
}

ChainView::ChainView(ChainParams params) : params_(std::move(params)) {
    Block g = genesis_block(params_);
    ledger::apply_unchecked(g.transactions.front(), utxos_);
    ids_.push_back(block_id(g.header));
    blocks_.push_back(std::move(g));
}

Difficulty ChainView::next_difficulty() const {
    const std::uint64_t h = height() + 1;
    const Difficulty current = Difficulty::decode(tip().header.difficulty_compact);
    if (params_.epoch_length == 0 || h % params_.epoch_length != 0) return current;
    const auto& last = blocks_[h - 1].header;
    const auto& first = blocks_[h - params_.epoch_length].header;
    // Equal timestamps are legal; treat a zero-length epoch as one second.
    const std::int64_t elapsed =
        std::max<std::int64_t>(1, static_cast<std::int64_t>(last.timestamp) - static_cast<std::int64_t>(first.timestamp));
    return retarget({current, params_.epoch_length, params_.target_block_interval}, elapsed);
}

TipContext ChainView::context() const {
    return {&params_, tip_id(), tip().header, height(), &utxos_, next_difficulty()};
}

std::optional<BlockError> validate_header(const BlockHeader& h, const TipContext& tip) {
    if (h.prev_hash != tip.tip_id)
        return block_err(BlockErrc::BadPrevHash, "prev_hash does not match tip " + tip.tip_id.hex());
    if (h.timestamp < tip.tip_header.timestamp) return block_err(BlockErrc::BadTimestamp, "timestamp earlier than parent");
    if (h.difficulty_compact != tip.next_difficulty.encode())
        return block_err(BlockErrc::BadDifficulty, "expected difficulty " + tip.next_difficulty.str());
    if (!meets_target(block_id(h), target_from_difficulty(tip.next_difficulty, tip.params->pow_limit)))
        return block_err(BlockErrc::BadPow, "block id not below target");
    return std::nullopt;
}

std::optional<BlockError> validate_header(const BlockHeader& h, const ChainView& chain) {
    return validate_header(h, chain.context());
}

std::optional<BlockError> validate_block(const Block& b, const TipContext& tip, ledger::UtxoSet* utxo_after) {
    if (auto e = validate_header(b.header, tip)) return e;
    if (b.transactions.empty()) return block_err(BlockErrc::BadCoinbase, "block has no transactions");
    if (compute_merkle_root(b.transactions) != b.header.merkle_root)
        return block_err(BlockErrc::BadMerkleRoot, "merkle root does not match body");
    if (serialize_block(b).size() > kMaxBlockSize) return block_err(BlockErrc::Oversize, "block exceeds 4 MiB");

    const std::uint64_t height = tip.height + 1;
    const auto& cb = b.transactions.front();
    if (!cb.is_coinbase()) return block_err(BlockErrc::BadCoinbase, "first transaction is not a coinbase");
    if (cb.coinbase_height != height) return block_err(BlockErrc::BadCoinbase, "coinbase height tag mismatch");

    ledger::UtxoSet running = *tip.utxos;
    ledger::Amount fees = 0;
    for (std::size_t i = 1; i < b.transactions.size(); ++i) {
        const auto& tx = b.transactions[i];
        if (tx.is_coinbase()) return {{BlockErrc::BadCoinbase, i, std::nullopt, "second coinbase"}};
        if (auto e = ledger::validate_tx(tx, running)) return {{BlockErrc::BadTx, i, *e, ""}};
        fees += ledger::tx_fee(tx, running);
        ledger::apply_unchecked(tx, running);
    }
    if (auto e = ledger::validate_tx(cb, running)) return {{BlockErrc::BadCoinbase, 0, *e, ""}};
    const ledger::Amount allowed = ledger::block_subsidy(height) + fees;
    if (cb.total_out() > allowed)
        return block_err(BlockErrc::BadCoinbase,
                         "coinbase pays " + std::to_string(cb.total_out()) + " > " + std::to_string(allowed));
    ledger::apply_unchecked(cb, running);
    if (utxo_after) *utxo_after = std::move(running);
    return std::nullopt;
}

std::optional<BlockError> validate_block(const Block& b, const ChainView& chain, ledger::UtxoSet* utxo_after) {
    return validate_block(b, chain.context(), utxo_after);
}

std::optional<BlockError> ChainView::try_append(const Block& b) {
    ledger::UtxoSet next;
    if (auto e = validate_block(b, *this, &next)) return e;
    utxos_ = std::move(next);
    ids_.push_back(block_id(b.header));
    blocks_.push_back(b);
    return std::nullopt;
}

void ChainView::append(const Block& b) {
    if (auto e = try_append(b)) throw ChainError(e->code, e->describe());
}

Block make_block_template(const TipContext& tip, const crypto::Address& miner,
                          std::vector<ledger::UtxoTransaction> txs, std::uint32_t timestamp) {
    ledger::UtxoSet running = *tip.utxos;
    ledger::Amount fees = 0;
    for (std::size_t i = 0; i < txs.size(); ++i) {
        if (auto e = ledger::validate_tx(txs[i], running)) throw ChainError(BlockErrc::BadTx, e->describe());
        fees += ledger::tx_fee(txs[i], running);
        ledger::apply_unchecked(txs[i], running);
    }
    Block b;
    b.transactions.push_back(ledger::build_coinbase(miner, tip.height + 1, fees, 0));
    for (auto& tx : txs) b.transactions.push_back(std::move(tx));
    b.header.prev_hash = tip.tip_id;
    b.header.merkle_root = compute_merkle_root(b.transactions);
    b.header.timestamp = std::max(timestamp, tip.tip_header.timestamp);
    b.header.difficulty_compact = tip.next_difficulty.encode();
    return b;
}

Block ChainView::make_template(const crypto::Address& miner, std::vector<ledger::UtxoTransaction> txs,
                               std::uint32_t timestamp) const {
    return make_block_template(context(), miner, std::move(txs), timestamp);
}

std::optional<AuditFailure> audit_chain(const std::vector<Block>& blocks, const ChainParams& params,
                                        const std::optional<HashDigest>& expected_tip) {
    if (blocks.empty()) return AuditFailure{0, block_err(BlockErrc::BadGenesis, "empty chain")};
    if (blocks.front() != genesis_block(params))
        return AuditFailure{0, block_err(BlockErrc::BadGenesis, "genesis does not match hardcoded block")};
    ChainView view(params);
    for (std::size_t h = 1; h < blocks.size(); ++h) {
        if (auto e = view.try_append(blocks[h])) return AuditFailure{h, *e};
    }
    if (expected_tip && view.tip_id() != *expected_tip)
        return AuditFailure{blocks.size() - 1, block_err(BlockErrc::BadPrevHash, "tip id differs from expected")};
    return std::nullopt;
}

ChainView build_view(const std::vector<Block>& blocks, const ChainParams& params) {
    if (blocks.empty() || blocks.front() != genesis_block(params))
        throw ChainError(BlockErrc::BadGenesis, "genesis does not match hardcoded block");
    ChainView view(params);
    for (std::size_t h = 1; h < blocks.size(); ++h) {
        if (auto e = view.try_append(blocks[h]))
            throw ChainError(e->code, "block " + std::to_string(h) + ": " + e->describe());
    }
    return view;
}

Selection select_chain(const std::vector<std::vector<Block>>& candidates, const ChainParams& params) {
    Selection best{std::nullopt, ChainView(params)};
    for (std::size_t i = 0; i < candidates.size(); ++i) {
        if (audit_chain(candidates[i], params)) continue;
        if (!best.index || candidates[i].size() > candidates[*best.index].size()) {
            best.index = i;
        }
    }
    if (best.index) best.view = build_view(candidates[*best.index], params);
    return best;
}

} // namespace bcw::chain
