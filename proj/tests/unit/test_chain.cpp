#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bcw/analysis/security.hpp"
#include "bcw/chain/block.hpp"
#include "bcw/chain/chain.hpp"
#include "bcw/chain/difficulty.hpp"
#include "bcw/chain/pow.hpp"
#include "bcw/chain/snapshot.hpp"
#include "bcw/ledger/wallet.hpp"

using namespace bcw;
using namespace bcw::chain;
using ledger::kCoin;

namespace {

Block mine_on(const ChainView& v, const crypto::Address& miner, std::vector<ledger::UtxoTransaction> txs,
              std::uint32_t ts) {
    auto out = mine_block(v.make_template(miner, std::move(txs), ts), v.next_target());
    EXPECT_TRUE(out.block.has_value());
    return *out.block;
}

// A chain with payments between a handful of keys, all decided by `seed`.
ChainView seeded_chain(std::uint64_t seed, int length) {
    std::mt19937_64 rng(seed);
    ChainView v(ChainParams::regtest());
    std::vector<crypto::KeyPair> keys;
    for (int i = 0; i < 3; ++i) keys.push_back(crypto::keygen(seed * 10 + static_cast<std::uint64_t>(i)));
    std::uint32_t ts = v.params().genesis_time;
    for (int h = 1; h <= length; ++h) {
        std::vector<ledger::UtxoTransaction> txs;
        auto& from = keys[rng() % keys.size()];
        auto bal = ledger::balance_of(ledger::address_of(from), v.utxos());
        if (bal > kCoin) {
            auto& to = keys[rng() % keys.size()];
            txs.push_back(ledger::build_transfer(from, {{ledger::address_of(to), bal / 3}}, v.utxos(), 1000));
        }
        ts += 1 + static_cast<std::uint32_t>(rng() % 1200);
        v.append(mine_on(v, ledger::address_of(keys[rng() % keys.size()]), txs, ts));
    }
    return v;
}

} // namespace

TEST(Header, SerializationIs80BytesAndRoundTrips) {
    BlockHeader h;
    h.timestamp = 7;
    h.nonce = 0xdeadbeef;
    h.difficulty_compact = Difficulty::from_integer(3).encode();
    auto raw = serialize_header(h);
    EXPECT_EQ(raw.size(), 80u);
    EXPECT_EQ(deserialize_header(raw), h);
}

TEST(Block, SerializationRoundTrip) {
    auto v = seeded_chain(3, 4);
    for (const auto& b : v.blocks()) EXPECT_EQ(deserialize_block(serialize_block(b)), b);
    auto bytes = encode_snapshot(v.blocks());
    EXPECT_EQ(decode_snapshot(bytes), v.blocks());
}

TEST(Difficulty, CompactEncodingRoundTrip) {
    for (std::uint64_t v : {1ull, 2ull, 255ull, 65535ull, 1ull << 30, 123456789ull}) {
        auto d = Difficulty::from_integer(v);
        EXPECT_EQ(Difficulty::decode(d.encode()), d);
    }
    auto half = Difficulty::from_ratio(3, 2);
    EXPECT_EQ(Difficulty::decode(half.encode()), half);
    EXPECT_THROW(Difficulty::decode(0), DomainError);
}

TEST(Difficulty, TargetIsLimitOverDifficulty) {
    BigInt limit = BigInt(1) << 252;
    EXPECT_EQ(target_from_difficulty(Difficulty::from_integer(4), limit), BigInt(1) << 250);
    EXPECT_EQ(target_from_difficulty(Difficulty{}, limit), limit);
}

TEST(Retarget, OneTwoFourWeeks) {
    DifficultyParams p{Difficulty::from_integer(1000), 2016, 600};
    EXPECT_EQ(retarget(p, kSecondsPerWeek), Difficulty::from_integer(2000));
    EXPECT_EQ(retarget(p, 2 * kSecondsPerWeek), Difficulty::from_integer(1000));
    EXPECT_EQ(retarget(p, 4 * kSecondsPerWeek), Difficulty::from_integer(500));
    EXPECT_THROW(retarget(p, 0), DomainError);
}

TEST(Retarget, ClampedAtOne) {
    DifficultyParams p{Difficulty{}, 2016, 600};
    EXPECT_EQ(retarget(p, 4 * kSecondsPerWeek), Difficulty{});
}

TEST(Retarget, ChainAppliesScheduleAtEpochBoundary) {
    ChainParams params = ChainParams::regtest();
    params.epoch_length = 4;
    params.target_block_interval = 600;
    ChainView v(params);
    auto miner = ledger::address_of(crypto::keygen(1));
    std::uint32_t ts = params.genesis_time;
    for (int h = 1; h < 4; ++h) v.append(mine_on(v, miner, {}, ts += 300));
    // Three 300 s gaps where 4 x 600 s were scheduled: 2400 / 900.
    EXPECT_EQ(v.next_difficulty(), Difficulty::from_ratio(2400, 900));
    v.append(mine_on(v, miner, {}, ts += 300));
    EXPECT_EQ(Difficulty::decode(v.tip().header.difficulty_compact), Difficulty::from_ratio(2400, 900));
}

TEST(PowOracle, MeanTriesMatchesGeometricDistribution) {
    const BigInt target = analysis::target_for_probability(1.0 / 4096);
    ChainView v(ChainParams::sim());
    double total = 0;
    const int seeds = 200;
    for (int s = 0; s < seeds; ++s) {
        auto tmpl = v.make_template(ledger::address_of(crypto::keygen(1)), {}, v.params().genesis_time + 1 + s);
        auto out = mine_block(tmpl, target);
        ASSERT_TRUE(out.block);
        EXPECT_TRUE(meets_target(block_id(out.block->header), target));
        EXPECT_LT(digest_to_bigint(block_id(out.block->header)), target);
        total += static_cast<double>(out.tries);
    }
    const double mean = total / seeds;
    const double se = std::sqrt(4096.0 * 4095.0) / std::sqrt(static_cast<double>(seeds));
    EXPECT_LT(std::abs(mean - 4096.0), 3 * se) << mean;
}

TEST(Pow, ExhaustionReportsNoBlock) {
    ChainView v(ChainParams::regtest());
    auto tmpl = v.make_template(ledger::address_of(crypto::keygen(1)), {}, v.params().genesis_time + 1);
    MineLimits lim;
    lim.max_coinbase_nonces = 1;
    lim.header_nonces = 4;
    auto out = mine_block(tmpl, BigInt(1), lim);
    EXPECT_FALSE(out.block);
    EXPECT_EQ(out.tries, 4u);
}

TEST(TamperEvidence, EverySingleBitFlipIsDetected) {
    std::mt19937_64 rng(99);
    int mutations = 0, detected = 0;
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        int len = 1 + static_cast<int>(seed % 20);
        auto v = seeded_chain(seed, len);
        ASSERT_FALSE(audit_chain(v.blocks(), v.params(), v.tip_id()));
        Bytes snap = encode_snapshot(v.blocks());
        for (int m = 0; m < 12; ++m) {
            Bytes bad = snap;
            std::size_t pos = rng() % bad.size();
            bad[pos] ^= static_cast<std::uint8_t>(1u << (rng() % 8));
            ++mutations;
            try {
                auto blocks = decode_snapshot(bad);
                if (audit_chain(blocks, v.params(), v.tip_id())) ++detected;
            } catch (const DomainError&) {
                ++detected;
            }
        }
    }
    EXPECT_GE(mutations, 500);
    EXPECT_EQ(detected, mutations);
}

TEST(TamperEvidence, TransactionEditBreaksMerkleRoot) {
    auto v = seeded_chain(7, 6);
    auto blocks = v.blocks();
    std::size_t target = 0;
    for (std::size_t i = 1; i < blocks.size(); ++i)
        if (blocks[i].transactions.size() > 1) target = i;
    ASSERT_GT(target, 0u);
    blocks[target].transactions[1].outputs[0].amount += 1;
    auto f = audit_chain(blocks, v.params());
    ASSERT_TRUE(f);
    EXPECT_EQ(f->height, target);
    EXPECT_EQ(f->error.code, BlockErrc::BadMerkleRoot);
}

TEST(TamperEvidence, ExpectedTipCatchesRewrittenTip) {
    auto v = seeded_chain(8, 3);
    auto blocks = v.blocks();
    blocks.pop_back();
    EXPECT_FALSE(audit_chain(blocks, v.params()));
    EXPECT_TRUE(audit_chain(blocks, v.params(), v.tip_id()));
}

TEST(Validation, RejectionCodes) {
    auto v = seeded_chain(4, 2);
    auto miner = ledger::address_of(crypto::keygen(77));
    const std::uint32_t ts = v.tip().header.timestamp + 10;
    auto good = mine_on(v, miner, {}, ts);
    EXPECT_FALSE(validate_block(good, v));

    auto b = good;
    b.header.prev_hash.bytes[0] ^= 1;
    EXPECT_EQ(validate_block(b, v)->code, BlockErrc::BadPrevHash);

    b = good;
    b.header.timestamp = v.tip().header.timestamp - 1;
    EXPECT_EQ(validate_header(b.header, v)->code, BlockErrc::BadTimestamp);

    b = good;
    b.header.difficulty_compact = Difficulty::from_integer(2).encode();
    EXPECT_EQ(validate_block(b, v)->code, BlockErrc::BadDifficulty);

    b = good;
    while (meets_target(block_id(b.header), v.next_target())) ++b.header.nonce;
    EXPECT_EQ(validate_block(b, v)->code, BlockErrc::BadPow);

    // Coinbase claiming more than subsidy + fees.
    auto tmpl = v.make_template(miner, {}, ts);
    tmpl.transactions[0].outputs[0].amount += 1;
    tmpl.header.merkle_root = compute_merkle_root(tmpl.transactions);
    auto greedy = mine_block(tmpl, v.next_target());
    EXPECT_EQ(validate_block(*greedy.block, v)->code, BlockErrc::BadCoinbase);

    // Wrong height tag.
    tmpl = v.make_template(miner, {}, ts);
    tmpl.transactions[0].coinbase_height += 1;
    tmpl.header.merkle_root = compute_merkle_root(tmpl.transactions);
    EXPECT_EQ(validate_block(*mine_block(tmpl, v.next_target()).block, v)->code, BlockErrc::BadCoinbase);
}

TEST(Validation, DoubleSpendInsideBlockIsBadTx) {
    ChainView v(ChainParams::regtest());
    auto k = crypto::keygen(3);
    auto addr = ledger::address_of(k);
    std::uint32_t ts = v.params().genesis_time;
    v.append(mine_on(v, addr, {}, ts += 600));
    auto a = ledger::build_transfer(k, {{ledger::address_of(crypto::keygen(4)), kCoin}}, v.utxos());
    auto b = ledger::build_transfer(k, {{ledger::address_of(crypto::keygen(5)), kCoin}}, v.utxos());
    EXPECT_THROW(v.make_template(addr, {a, b}, ts + 600), ChainError);
    auto tmpl = v.make_template(addr, {a}, ts + 600);
    tmpl.transactions.push_back(b);
    tmpl.header.merkle_root = compute_merkle_root(tmpl.transactions);
    auto blk = *mine_block(tmpl, v.next_target()).block;
    auto err = validate_block(blk, v);
    ASSERT_TRUE(err);
    EXPECT_EQ(err->code, BlockErrc::BadTx);
    EXPECT_EQ(err->tx_index, 2u);
    ASSERT_TRUE(err->cause);
    EXPECT_EQ(err->cause->code, ledger::LedgerErrc::MissingInput);
}

TEST(Validation, FeesGoToMiner) {
    ChainView v(ChainParams::regtest());
    auto k = crypto::keygen(3);
    std::uint32_t ts = v.params().genesis_time;
    v.append(mine_on(v, ledger::address_of(k), {}, ts += 600));
    auto tx = ledger::build_transfer(k, {{ledger::address_of(crypto::keygen(4)), kCoin}}, v.utxos(), 5000);
    auto miner = ledger::address_of(crypto::keygen(6));
    v.append(mine_on(v, miner, {tx}, ts += 600));
    EXPECT_EQ(ledger::balance_of(miner, v.utxos()), ledger::block_subsidy(2) + 5000);
}

TEST(ForkChoice, LongestValidWinsAndTiesKeepFirst) {
    auto a = seeded_chain(11, 3).blocks();
    auto b = seeded_chain(12, 5).blocks();
    auto c = seeded_chain(13, 5).blocks();
    auto params = ChainParams::regtest();
    auto sel = select_chain({a, b, c}, params);
    EXPECT_EQ(sel.index, 1u);
    b.back().transactions[0].outputs[0].amount += 1;  // invalidate the longest
    sel = select_chain({a, b, c}, params);
    EXPECT_EQ(sel.index, 2u);
    EXPECT_EQ(sel.view.height(), 5u);
    std::vector<Block> bad_genesis = a;
    bad_genesis[0].header.nonce ^= 1;
    EXPECT_FALSE(select_chain({bad_genesis}, params).index);
}

TEST(Snapshot, RejectsGarbage) {
    EXPECT_THROW(decode_snapshot(as_bytes("nope")), DecodeError);
    auto v = seeded_chain(2, 2);
    Bytes s = encode_snapshot(v.blocks());
    s.push_back(1);
    EXPECT_THROW(decode_snapshot(s), DecodeError);
}

TEST(Genesis, IsFixedPerParams) {
    EXPECT_EQ(genesis_block(ChainParams::regtest()), genesis_block(ChainParams::regtest()));
    ChainView v(ChainParams::regtest());
    EXPECT_EQ(v.height(), 0u);
    EXPECT_EQ(v.tip_id(), block_id(genesis_block(ChainParams::regtest()).header));
}
