#include <gtest/gtest.h>

#include <random>

#include "bcw/ledger/transaction.hpp"
#include "bcw/ledger/utxo.hpp"
#include "bcw/ledger/wallet.hpp"

using namespace bcw;
using namespace bcw::ledger;

namespace {

struct Fixture {
    crypto::KeyPair alice = crypto::keypair_from_label("alice");
    crypto::KeyPair bob = crypto::keypair_from_label("bob");
    crypto::KeyPair carol = crypto::keypair_from_label("carol");
    UtxoSet state;

    OutPoint mint(const crypto::KeyPair& k, Amount amount, std::uint64_t tag) {
        UtxoTransaction tx;
        tx.outputs.push_back({amount, address_of(k)});
        tx.coinbase_height = tag;
        apply_unchecked(tx, state);
        return {txid(tx), 0};
    }
};

std::optional<LedgerErrc> code_of(const UtxoTransaction& tx, const UtxoSet& s) {
    auto e = validate_tx(tx, s);
    if (!e) return std::nullopt;
    return e->code;
}

} // namespace

// The four-party walkthrough is checked against a hand-written table.
TEST(WalkthroughOracle, FinalUnspentSetAndMarkings) {
    auto wt = replay_four_party_example();
    std::map<crypto::Address, std::string> names;
    for (const auto& [n, k] : wt.parties) names[address_of(k)] = n;

    std::map<std::string, Amount> unspent;
    for (const auto& [op, out] : wt.state.entries()) unspent[names.at(out.recipient)] += out.amount;
    std::map<std::string, Amount> expect{{"charlie", 8 * kCoin}, {"bob", 9 * kCoin}, {"dave", 3 * kCoin},
                                         {"alice", 5 * kCoin}};
    EXPECT_EQ(unspent, expect);
    EXPECT_EQ(wt.state.total_value(), 25 * kCoin);
    EXPECT_EQ(wt.state.size(), 4u);

    std::map<int, bool> spent_expect{{1, true}, {2, true}, {3, true}, {4, false}, {5, false}, {6, false}, {7, false}};
    EXPECT_EQ(wt.spent, spent_expect);
    ASSERT_EQ(wt.steps.size(), 4u);
    EXPECT_EQ(wt.steps[1].spent, std::vector<int>{1});
    EXPECT_EQ(wt.steps[1].created, (std::vector<int>{2, 3}));
    EXPECT_EQ(wt.steps[2].spent, std::vector<int>{2});
    EXPECT_EQ(wt.steps[3].spent, std::vector<int>{3});
    for (const auto& [n, op] : wt.numbered) EXPECT_EQ(wt.state.contains(op), !wt.spent.at(n)) << n;
}

TEST(Transaction, SerializationRoundTrip) {
    Fixture f;
    f.mint(f.alice, 10 * kCoin, 1);
    auto tx = build_transfer(f.alice, {{address_of(f.bob), 4 * kCoin}}, f.state, 1000);
    auto bytes = serialize(tx);
    EXPECT_EQ(deserialize_tx(bytes), tx);
    bytes.push_back(0);
    EXPECT_THROW(deserialize_tx(bytes), DecodeError);
    bytes.resize(bytes.size() - 5);
    EXPECT_THROW(deserialize_tx(bytes), DecodeError);
}

TEST(Transaction, CoinbaseHeightChangesTxid) {
    auto a = build_coinbase(address_of(crypto::keypair_from_label("m")), 1, 0, 0);
    auto b = build_coinbase(address_of(crypto::keypair_from_label("m")), 2, 0, 0);
    EXPECT_NE(txid(a), txid(b));
    EXPECT_TRUE(a.is_coinbase());
    EXPECT_EQ(a.total_out(), block_subsidy(1));
    EXPECT_EQ(deserialize_tx(serialize(a)), a);
}

TEST(Validation, HappyPathAndFee) {
    Fixture f;
    f.mint(f.alice, 10 * kCoin, 1);
    auto tx = build_transfer(f.alice, {{address_of(f.bob), 4 * kCoin}}, f.state, 500);
    EXPECT_FALSE(validate_tx(tx, f.state));
    EXPECT_EQ(tx_fee(tx, f.state), 500);
    EXPECT_GT(fee_rate(tx, f.state), 0);
    auto after = apply_tx(tx, f.state);
    EXPECT_EQ(balance_of(address_of(f.bob), after), 4 * kCoin);
    EXPECT_EQ(balance_of(address_of(f.alice), after), 6 * kCoin - 500);
    EXPECT_EQ(after.total_value() + 500, f.state.total_value());
    EXPECT_EQ(balance_of(address_of(f.alice), f.state), 10 * kCoin);  // original untouched
}

TEST(Validation, DoubleSpendAcrossTransactionsRejected) {
    Fixture f;
    f.mint(f.alice, 10 * kCoin, 1);
    auto pay_bob = build_transfer(f.alice, {{address_of(f.bob), 4 * kCoin}}, f.state);
    auto pay_carol = build_transfer(f.alice, {{address_of(f.carol), 4 * kCoin}}, f.state);
    auto after = apply_tx(pay_bob, f.state);
    EXPECT_EQ(code_of(pay_carol, after), LedgerErrc::MissingInput);
}

TEST(Validation, DuplicateInputRejected) {
    Fixture f;
    auto op = f.mint(f.alice, 10 * kCoin, 1);
    UtxoTransaction tx;
    tx.inputs.push_back({op, {}, {}});
    tx.inputs.push_back({op, {}, {}});
    tx.outputs.push_back({15 * kCoin, address_of(f.bob)});
    sign_input(tx, 1, f.alice);
    sign_input(tx, 0, f.alice);  // pubkeys are committed, so sign last
    EXPECT_EQ(code_of(tx, f.state), LedgerErrc::DuplicateInput);
}

TEST(Validation, WrongKeyAndBadSignatureRejected) {
    Fixture f;
    auto op = f.mint(f.alice, 10 * kCoin, 1);
    UtxoTransaction tx;
    tx.inputs.push_back({op, {}, {}});
    tx.outputs.push_back({10 * kCoin, address_of(f.bob)});
    sign_input(tx, 0, f.bob);  // not the owner
    EXPECT_EQ(code_of(tx, f.state), LedgerErrc::BadSignature);
    sign_input(tx, 0, f.alice);
    EXPECT_FALSE(validate_tx(tx, f.state));
    tx.outputs[0].amount -= 1;  // changes the signed message
    EXPECT_EQ(code_of(tx, f.state), LedgerErrc::BadSignature);
}

TEST(Validation, OverspendAndAmountChecks) {
    Fixture f;
    auto op = f.mint(f.alice, 10 * kCoin, 1);
    UtxoTransaction tx;
    tx.inputs.push_back({op, {}, {}});
    tx.outputs.push_back({11 * kCoin, address_of(f.bob)});
    sign_input(tx, 0, f.alice);
    EXPECT_EQ(code_of(tx, f.state), LedgerErrc::InsufficientFunds);
    tx.outputs[0].amount = 0;
    sign_input(tx, 0, f.alice);
    EXPECT_EQ(code_of(tx, f.state), LedgerErrc::BadAmount);
    tx.outputs.clear();
    sign_input(tx, 0, f.alice);
    EXPECT_EQ(code_of(tx, f.state), LedgerErrc::NoOutputs);
}

TEST(Validation, ApplyTxThrowsAndLeavesStateAlone) {
    Fixture f;
    f.mint(f.alice, 1 * kCoin, 1);
    UtxoSet before = f.state;
    UtxoTransaction tx;
    tx.inputs.push_back({{HashDigest{}, 0}, {}, {}});
    tx.outputs.push_back({1, address_of(f.bob)});
    EXPECT_THROW(apply_tx(tx, f.state), LedgerError);
    EXPECT_EQ(f.state, before);
}

TEST(Wallet, TransferSelectsLargestFirstWithChange) {
    Fixture f;
    f.mint(f.alice, 1 * kCoin, 1);
    f.mint(f.alice, 7 * kCoin, 2);
    f.mint(f.alice, 3 * kCoin, 3);
    auto tx = build_transfer(f.alice, {{address_of(f.bob), 8 * kCoin}}, f.state);
    ASSERT_EQ(tx.inputs.size(), 2u);
    ASSERT_EQ(tx.outputs.size(), 2u);
    EXPECT_EQ(tx.outputs[1].amount, 2 * kCoin);
    EXPECT_FALSE(validate_tx(tx, f.state));
    EXPECT_THROW(build_transfer(f.alice, {{address_of(f.bob), 12 * kCoin}}, f.state), LedgerError);
}

TEST(Wallet, Consolidation) {
    Fixture f;
    f.mint(f.alice, 1 * kCoin, 1);
    EXPECT_THROW(build_consolidation(f.alice, f.state), LedgerError);
    f.mint(f.alice, 2 * kCoin, 2);
    f.mint(f.alice, 3 * kCoin, 3);
    auto tx = build_consolidation(f.alice, f.state, 100);
    EXPECT_EQ(tx.inputs.size(), 3u);
    ASSERT_EQ(tx.outputs.size(), 1u);
    EXPECT_EQ(tx.outputs[0].amount, 6 * kCoin - 100);
    auto after = apply_tx(tx, f.state);
    EXPECT_EQ(after.owned_by(address_of(f.alice)).size(), 1u);
}

TEST(Wallet, JointPayment) {
    Fixture f;
    auto a = f.mint(f.alice, 3 * kCoin, 1);
    auto b = f.mint(f.bob, 4 * kCoin, 2);
    auto tx = build_joint_payment({f.alice, f.bob}, {a, b}, address_of(f.carol), 7 * kCoin, f.state);
    EXPECT_FALSE(validate_tx(tx, f.state));
    EXPECT_THROW(build_joint_payment({f.alice}, {a, b}, address_of(f.carol), 7 * kCoin, f.state), LedgerError);
    EXPECT_THROW(build_joint_payment({f.alice, f.bob}, {a, b}, address_of(f.carol), 8 * kCoin, f.state), LedgerError);
}

TEST(Utxo, ConservationOverRandomTransfers) {
    Fixture f;
    std::vector<crypto::KeyPair> keys{f.alice, f.bob, f.carol};
    for (int i = 0; i < 3; ++i) f.mint(keys[i], 10 * kCoin, i + 1);
    std::mt19937_64 rng(5);
    Amount fees = 0;
    const Amount total = f.state.total_value();
    for (int i = 0; i < 60; ++i) {
        auto& from = keys[rng() % 3];
        auto& to = keys[rng() % 3];
        Amount have = balance_of(address_of(from), f.state);
        if (have < 2) continue;
        Amount amt = 1 + static_cast<Amount>(rng() % static_cast<std::uint64_t>(have / 2));
        auto tx = build_transfer(from, {{address_of(to), amt}}, f.state, 1);
        fees += tx_fee(tx, f.state);
        f.state = apply_tx(tx, f.state);
        ASSERT_EQ(f.state.total_value() + fees, total);
    }
}

TEST(Subsidy, Halving) {
    EXPECT_EQ(block_subsidy(0), 50 * kCoin);
    EXPECT_EQ(block_subsidy(kHalvingInterval), 25 * kCoin);
    EXPECT_EQ(block_subsidy(64 * kHalvingInterval), 0);
}
