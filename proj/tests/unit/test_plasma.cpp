#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "bcw/crypto/address.hpp"
#include "bcw/plasma/plasma_chain.hpp"
#include "bcw/plasma/root_contract.hpp"
#include "bcw/plasma/scenario.hpp"

using namespace bcw;
using namespace bcw::plasma;
using ledger::kCoin;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream s;
    s << f.rdbuf();
    return s.str();
}

bool has_event(const TranscriptStep& s, std::string_view needle) {
    for (const auto& e : s.events)
        if (e.find(needle) != std::string::npos) return true;
    return false;
}

template <class F>
PlasmaErrc plasma_code(F&& f) {
    try {
        f();
    } catch (const PlasmaError& e) {
        return e.code();
    }
    ADD_FAILURE() << "no PlasmaError thrown";
    return PlasmaErrc::InvalidTransaction;
}

struct Rig {
    crypto::KeyPair op = crypto::keypair_from_label("op");
    crypto::KeyPair alice = crypto::keypair_from_label("alice");
    crypto::KeyPair bob = crypto::keypair_from_label("bob");
    PlasmaChain chain{op};
    RootContract root{chain.operator_address()};

    Address addr(const crypto::KeyPair& k) const { return crypto::derive_address(k.pub, *k.curve); }

    void commit_last() { root.submit_block(chain.operator_address(), chain.blocks().back().merkle_root); }

    // Alice deposits 10, pays Bob 4. Outputs: 1 deposit, 2 change, 3 Bob.
    void basic() {
        root.fund(addr(alice), 100 * kCoin);
        root.fund(addr(bob), 100 * kCoin);
        auto d = root.deposit(addr(alice), 10 * kCoin);
        chain.apply_deposit(d);
        commit_last();
        chain.submit(plasma_transfer(alice, addr(bob), 4 * kCoin, chain.utxos()));
        chain.seal_block();
        commit_last();
    }
};

} // namespace

TEST(PlasmaDemo, MatchesGoldenTranscript) {
    const auto golden = slurp(std::string(BCW_FIXTURES) + "/plasma_demo.golden.json");
    ASSERT_FALSE(golden.empty());
    EXPECT_EQ(run_three_party_example().to_json(), golden);
}

TEST(PlasmaDemo, BalancesAfterThreeTransfers) {
    const auto t = run_three_party_example();
    ASSERT_GE(t.steps.size(), 5u);
    const auto& b = t.steps[4].plasma_balances;
    EXPECT_EQ(b.at("Alice"), 7 * kCoin);
    EXPECT_EQ(b.at("Bob"), 2 * kCoin);
    EXPECT_EQ(b.at("Charlie"), 1 * kCoin);
}

TEST(PlasmaDemo, HonestExitPaysAndSpentExitIsReverted) {
    const auto t = run_three_party_example();
    ASSERT_EQ(t.steps.size(), 12u);
    EXPECT_TRUE(has_event(t.steps[7], "withdrawal #1 pays 2 to Bob"));
    EXPECT_EQ(t.steps[7].layer1_balances.at("Bob"), 102 * kCoin);
    EXPECT_TRUE(has_event(t.steps[9], "withdrawal #2 reverted"));
    // Alice loses her bond to the challenger and gets nothing for UTXO 3
    EXPECT_EQ(t.steps.back().layer1_balances.at("Alice"), 90 * kCoin - kCoin / 10);
    EXPECT_EQ(t.steps.back().layer1_balances.at("Charlie"), 100 * kCoin + kCoin / 10);
    EXPECT_TRUE(has_event(t.steps.back(), "nothing to finalize"));
}

TEST(PlasmaWorld, DemoConservesValue) {
    PlasmaWorld w;
    w.deposit("Alice", 10 * kCoin);
    w.transfer("Alice", "Bob", 5 * kCoin);
    EXPECT_TRUE(w.conserved());
    const auto id = w.withdraw("Bob", 3);
    ASSERT_NE(id, 0u);
    w.advance(7);
    w.finalize();
    EXPECT_EQ(w.root().withdrawal(id).status, WithdrawalStatus::Finalized);
    EXPECT_TRUE(w.conserved());
    EXPECT_EQ(w.root().locked_balance(), 5 * kCoin);
}

TEST(PlasmaWorld, EarlyFinalizeDoesNothing) {
    PlasmaWorld w;
    w.deposit("Alice", 10 * kCoin);
    const auto id = w.withdraw("Alice", 1);
    ASSERT_NE(id, 0u);
    w.advance(6);
    w.finalize();
    EXPECT_EQ(w.root().withdrawal(id).status, WithdrawalStatus::Pending);
    w.advance(1);
    w.finalize();
    EXPECT_EQ(w.root().withdrawal(id).status, WithdrawalStatus::Finalized);
}

TEST(PlasmaFraud, HonestPartiesRecoverWhatTheyHeld) {
    const auto r = run_fraud_scenario();
    EXPECT_FALSE(r.fraudulent_exit_paid);
    EXPECT_FALSE(r.entitled.empty());
    for (const auto& [name, amount] : r.entitled) EXPECT_EQ(r.recovered.at(name), amount) << name;
    EXPECT_EQ(r.entitled.at("Alice"), 7 * kCoin);
    EXPECT_EQ(r.entitled.at("Bob"), 8 * kCoin);
}

TEST(PlasmaScript, DoubleExitConfig) {
    const auto t = run_script(slurp(std::string(BCW_CONFIGS) + "/plasma_double_exit.json"));
    ASSERT_EQ(t.steps.size(), 8u);
    // Alice exits the spent deposit; Bob's challenge reverts it
    EXPECT_TRUE(has_event(t.steps[3], "reverted"));
    const auto& last = t.steps.back();
    EXPECT_EQ(last.layer1_balances.at("Bob"), 104 * kCoin + kCoin / 10);
    EXPECT_EQ(last.layer1_balances.at("Alice"), 90 * kCoin - kCoin / 10);
    EXPECT_EQ(last.plasma_balances.at("Alice"), 6 * kCoin);
}

TEST(PlasmaScript, MalformedScriptIsRejected) {
    EXPECT_THROW(run_script("{"), DomainError);
    EXPECT_THROW(run_script(R"([{"action":"teleport"}])"), DomainError);
    EXPECT_THROW(run_script(R"([{"action":"deposit","user":"Alice"}])"), DomainError);
}

TEST(PlasmaScript, RejectedActionsAreRecordedNotThrown) {
    const auto t = run_script(R"([{"action":"transfer","from":"Alice","to":"Bob","amount":5}])");
    ASSERT_EQ(t.steps.size(), 1u);
    EXPECT_FALSE(t.steps[0].events.empty());
}

TEST(PlasmaChainUnit, BlocksAreSignedAndProofsVerify) {
    Rig s;
    s.basic();
    for (const auto& b : s.chain.blocks()) EXPECT_TRUE(verify_block(b, s.op.pub));
    auto forged = s.chain.blocks().back();
    forged.merkle_root.bytes[0] ^= 1;
    EXPECT_FALSE(verify_block(forged, s.op.pub));

    const auto& n3 = s.chain.by_number(3);
    EXPECT_EQ(n3.output.amount, 4 * kCoin);
    EXPECT_EQ(n3.output.recipient, s.addr(s.bob));
    const auto proof = s.chain.prove(n3.position);
    EXPECT_EQ(proof.position, n3.position);
    EXPECT_TRUE(s.chain.is_spent(s.chain.by_number(1).outpoint));
}

TEST(PlasmaChainUnit, DoubleSpendInQueueRejected) {
    Rig s;
    s.basic();
    auto tx = plasma_transfer(s.bob, s.addr(s.alice), 1 * kCoin, s.chain.utxos());
    s.chain.submit(tx);
    EXPECT_EQ(plasma_code([&] { s.chain.submit(tx); }), PlasmaErrc::InvalidTransaction);
    EXPECT_THROW(plasma_transfer(s.bob, s.addr(s.alice), 50 * kCoin, s.chain.utxos()), DomainError);
}

TEST(PlasmaChainUnit, EmptySealRejected) {
    Rig s;
    EXPECT_EQ(plasma_code([&] { s.chain.seal_block(); }), PlasmaErrc::InvalidTransaction);
}

TEST(RootContractUnit, OnlyOperatorCommits) {
    Rig s;
    EXPECT_EQ(plasma_code([&] { s.root.submit_block(s.addr(s.alice), HashDigest{}); }),
              PlasmaErrc::UnauthorizedCommitter);
    s.root.submit_block(s.chain.operator_address(), HashDigest{});
    s.root.submit_block(s.chain.operator_address(), HashDigest{});
    EXPECT_EQ(s.root.headers().size(), 2u);
}

TEST(RootContractUnit, DepositChecks) {
    Rig s;
    s.root.fund(s.addr(s.alice), 5 * kCoin);
    EXPECT_EQ(plasma_code([&] { s.root.deposit(s.addr(s.alice), 0); }), PlasmaErrc::BadAmount);
    EXPECT_EQ(plasma_code([&] { s.root.deposit(s.addr(s.alice), 6 * kCoin); }),
              PlasmaErrc::InsufficientLayer1Funds);
    s.root.deposit(s.addr(s.alice), 5 * kCoin);
    EXPECT_EQ(s.root.locked_balance(), 5 * kCoin);
    EXPECT_EQ(s.root.layer1_balance(s.addr(s.alice)), 0);
}

TEST(RootContractUnit, WithdrawalValidation) {
    Rig s;
    s.basic();
    const auto bond = s.root.config().bond;
    const auto p3 = s.chain.prove(s.chain.by_number(3).position);
    EXPECT_EQ(plasma_code([&] { s.root.request_withdrawal(s.addr(s.bob), p3, 5 * kCoin, bond); }),
              PlasmaErrc::BadAmount);
    EXPECT_EQ(plasma_code([&] { s.root.request_withdrawal(s.addr(s.bob), p3, 4 * kCoin, bond - 1); }),
              PlasmaErrc::InsufficientBond);
    auto bad = p3;
    bad.position.block = 99;
    EXPECT_EQ(plasma_code([&] { s.root.request_withdrawal(s.addr(s.bob), bad, 4 * kCoin, bond); }),
              PlasmaErrc::UnknownBlock);
    bad = p3;
    bad.tx.outputs[1].amount += 1;
    EXPECT_EQ(plasma_code([&] { s.root.request_withdrawal(s.addr(s.bob), bad, 4 * kCoin, bond); }),
              PlasmaErrc::BadProof);

    const auto id = s.root.request_withdrawal(s.addr(s.bob), p3, 4 * kCoin, bond);
    EXPECT_EQ(s.root.withdrawal(id).recipient, s.addr(s.bob));
    EXPECT_EQ(s.root.withdrawal(id).deadline, s.root.now() + 7);
    EXPECT_EQ(plasma_code([&] { s.root.request_withdrawal(s.addr(s.bob), p3, 4 * kCoin, bond); }),
              PlasmaErrc::DuplicateExit);
}

TEST(RootContractUnit, ChallengeRules) {
    Rig s;
    s.basic();
    const auto bond = s.root.config().bond;
    // Alice exits the deposit she already spent
    const auto p1 = s.chain.prove(s.chain.by_number(1).position);
    const auto id = s.root.request_withdrawal(s.addr(s.alice), p1, 10 * kCoin, bond);
    const auto spender = *s.chain.spender_of(s.chain.by_number(1).outpoint);
    const auto spend = s.chain.prove(spender);

    // a proof of an unrelated transaction is no challenge
    EXPECT_EQ(plasma_code([&] { s.root.challenge(s.addr(s.bob), id, p1); }), PlasmaErrc::ProofMismatch);
    EXPECT_EQ(plasma_code([&] { s.root.challenge(s.addr(s.bob), 42, spend); }), PlasmaErrc::UnknownWithdrawal);

    const auto before = s.root.layer1_balance(s.addr(s.bob));
    s.root.challenge(s.addr(s.bob), id, spend);
    EXPECT_EQ(s.root.withdrawal(id).status, WithdrawalStatus::Reverted);
    EXPECT_EQ(s.root.layer1_balance(s.addr(s.bob)), before + bond);
    EXPECT_EQ(plasma_code([&] { s.root.challenge(s.addr(s.bob), id, spend); }), PlasmaErrc::NotPending);
}

TEST(RootContractUnit, ChallengeAfterWindowFails) {
    Rig s;
    s.basic();
    const auto bond = s.root.config().bond;
    const auto p1 = s.chain.prove(s.chain.by_number(1).position);
    const auto id = s.root.request_withdrawal(s.addr(s.alice), p1, 10 * kCoin, bond);
    const auto spend = s.chain.prove(*s.chain.spender_of(s.chain.by_number(1).outpoint));
    s.root.advance_time(7);
    EXPECT_EQ(plasma_code([&] { s.root.challenge(s.addr(s.bob), id, spend); }), PlasmaErrc::WindowClosed);
}

TEST(RootContractUnit, FinalizePaysRecipientInOrder) {
    Rig s;
    s.basic();
    const auto bond = s.root.config().bond;
    const auto p2 = s.chain.prove(s.chain.by_number(2).position);
    const auto p3 = s.chain.prove(s.chain.by_number(3).position);
    // Bob asks for Alice's change: payment still goes to Alice
    const auto a = s.root.request_withdrawal(s.addr(s.bob), p2, 6 * kCoin, bond);
    const auto b = s.root.request_withdrawal(s.addr(s.bob), p3, 4 * kCoin, bond);
    s.root.advance_time(7);
    const auto pays = s.root.finalize_withdrawals();
    ASSERT_EQ(pays.size(), 2u);
    EXPECT_EQ(pays[0].withdrawal_id, a);
    EXPECT_EQ(pays[0].to, s.addr(s.alice));
    EXPECT_EQ(pays[1].withdrawal_id, b);
    EXPECT_EQ(s.root.locked_balance(), 0);
    EXPECT_EQ(s.root.total_paid_out(), 10 * kCoin);
    EXPECT_TRUE(s.root.finalize_withdrawals().empty());
}

TEST(RootContractUnit, FraudProofNeedsActualFraud) {
    Rig s;
    s.basic();
    const auto spend = s.chain.prove(*s.chain.spender_of(s.chain.by_number(1).outpoint));
    const auto src = s.chain.prove(s.chain.by_number(1).position);
    EXPECT_EQ(plasma_code([&] { s.root.prove_invalid_block(s.addr(s.bob), spend, {src}); }),
              PlasmaErrc::ProofMismatch);
    EXPECT_FALSE(s.root.first_fraudulent_block().has_value());
}
