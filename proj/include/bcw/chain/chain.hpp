#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bcw/chain/block.hpp"
#include "bcw/chain/difficulty.hpp"
#include "bcw/ledger/utxo.hpp"

namespace bcw::chain {

struct ChainParams {
    std::string name;
    BigInt pow_limit;
    Difficulty initial_difficulty;
    std::uint32_t epoch_length = 2016;
    std::uint32_t target_block_interval = 600;
    std::uint32_t genesis_time = 1231006505;

    /// 65535 << 208, 2016-block epochs, 600 s spacing.
    static ChainParams mainnet();
    /// pow_limit 2^252 (about one block per 16 tries) and 2016-block epochs.
    static ChainParams regtest();
    /// pow_limit 2^256: every header passes at difficulty 1.
    static ChainParams sim();
    /// "mainnet", "regtest" or "sim"; throws DomainError("UnknownParams").
    static ChainParams by_name(std::string_view name);
};

/// The hardcoded first block: one coinbase of the height-0 subsidy to a fixed
/// unspendable address. Exempt from proof of work.
Block genesis_block(const ChainParams& params);

enum class BlockErrc {
    BadPrevHash,
    BadMerkleRoot,
    BadPow,
    BadDifficulty,
    BadTimestamp,
    BadCoinbase,
    BadTx,
    Oversize,
    BadGenesis,
};

constexpr std::string_view to_string(BlockErrc c) {
    switch (c) {
    case BlockErrc::BadPrevHash: return "BadPrevHash";
    case BlockErrc::BadMerkleRoot: return "BadMerkleRoot";
    case BlockErrc::BadPow: return "BadPow";
    case BlockErrc::BadDifficulty: return "BadDifficulty";
    case BlockErrc::BadTimestamp: return "BadTimestamp";
    case BlockErrc::BadCoinbase: return "BadCoinbase";
    case BlockErrc::BadTx: return "BadTx";
    case BlockErrc::Oversize: return "Oversize";
    case BlockErrc::BadGenesis: return "BadGenesis";
    }
    return "BlockError";
}

using ChainError = CodedError<BlockErrc>;

struct BlockError {
    BlockErrc code;
    std::optional<std::size_t> tx_index;
    std::optional<ledger::TxError> cause;
    std::string message;

    std::string describe() const;
};

/// Everything needed to validate a child of some block: the parent's id,
/// header and height, the UTXO set after it, and the scheduled difficulty.
struct TipContext {
    const ChainParams* params = nullptr;
    HashDigest tip_id;
    BlockHeader tip_header;
    std::uint64_t height = 0;
    const ledger::UtxoSet* utxos = nullptr;
    Difficulty next_difficulty;
};

/// Blocks from genesis, all validated at append time, plus the derived UTXO set.
class ChainView {
public:
    explicit ChainView(ChainParams params);

    const ChainParams& params() const { return params_; }
    const std::vector<Block>& blocks() const { return blocks_; }
    const std::vector<HashDigest>& ids() const { return ids_; }
    const ledger::UtxoSet& utxos() const { return utxos_; }
    std::uint64_t height() const { return blocks_.size() - 1; }
    const Block& tip() const { return blocks_.back(); }
    const HashDigest& tip_id() const { return ids_.back(); }

    /// Difficulty a block at `height()+1` must carry.
    Difficulty next_difficulty() const;
    BigInt next_target() const { return target_from_difficulty(next_difficulty(), params_.pow_limit); }
    TipContext context() const;

    /// Validates against the tip and appends. Throws ChainError.
    void append(const Block& b);
    std::optional<BlockError> try_append(const Block& b);

    /// Fully validated template on the tip: coinbase (subsidy + fees) then txs.
    Block make_template(const crypto::Address& miner, std::vector<ledger::UtxoTransaction> txs,
                        std::uint32_t timestamp) const;

private:
    ChainParams params_;
    std::vector<Block> blocks_;
    std::vector<HashDigest> ids_;
    ledger::UtxoSet utxos_;
};

/// Prev link, merkle root, timestamp monotonicity, scheduled difficulty, PoW,
/// a single leading coinbase with amount <= subsidy + fees and height tag,
/// every transaction against the running UTXO set, and the size limit.
/// `utxo_after` receives the post-block set on success.
std::optional<BlockError> validate_block(const Block& b, const TipContext& tip,
                                         ledger::UtxoSet* utxo_after = nullptr);
std::optional<BlockError> validate_block(const Block& b, const ChainView& chain,
                                         ledger::UtxoSet* utxo_after = nullptr);

/// Header-only checks (link, timestamp, difficulty, PoW), usable without the body.
std::optional<BlockError> validate_header(const BlockHeader& h, const TipContext& tip);
std::optional<BlockError> validate_header(const BlockHeader& h, const ChainView& chain);

/// Coinbase-then-transactions template on an arbitrary tip; transactions must
/// already be valid in order. Throws ChainError(BadTx).
Block make_block_template(const TipContext& tip, const crypto::Address& miner,
                          std::vector<ledger::UtxoTransaction> txs, std::uint32_t timestamp);

struct AuditFailure {
    std::size_t height;
    BlockError error;
};

/// Revalidates a foreign chain from the hardcoded genesis. When expected_tip is
/// given the final block id must equal it, which also catches edits to the tip.
std::optional<AuditFailure> audit_chain(const std::vector<Block>& blocks, const ChainParams& params,
                                        const std::optional<HashDigest>& expected_tip = std::nullopt);

/// Rebuilds a ChainView from blocks; throws ChainError on the first bad block.
ChainView build_view(const std::vector<Block>& blocks, const ChainParams& params);

struct Selection {
    std::optional<std::size_t> index;  // chosen candidate, empty when none valid
    ChainView view;
};

/// Longest valid candidate; invalid ones are discarded and ties keep the
/// earliest candidate.
Selection select_chain(const std::vector<std::vector<Block>>& candidates, const ChainParams& params);

} // namespace bcw::chain
