#include <gtest/gtest.h>

#include <random>
#include <set>

#include "bcw/account/account_chain.hpp"
#include "bcw/account/call_data.hpp"
#include "bcw/account/programs.hpp"
#include "bcw/account/transition.hpp"
#include "bcw/account/world_state.hpp"

using namespace bcw;
using namespace bcw::account;

namespace {

constexpr std::uint64_t kGas = 200000;

struct World {
    std::vector<crypto::KeyPair> users;
    Address miner = account_address(crypto::keypair_from_label("miner"));
    WorldState state;

    explicit World(int n, Amount each = 10'000'000) {
        for (int i = 0; i < n; ++i) {
            users.push_back(crypto::keypair_from_label("user" + std::to_string(i)));
            state.at(account_address(users.back())).balance = each;
        }
    }

    TransitionResult run(const AccountTx& tx) {
        auto r = state_transition(state, tx, miner);
        state = r.state;
        return r;
    }
    TransitionResult call(int who, const Address& to, const CallData& cd, Amount value = 0) {
        return run(make_call_tx(state, users[who], to, value, &cd, kGas, 1));
    }
    Address deploy(int who, const std::string& program, std::vector<Bytes> args) {
        auto [s, addr] = deploy_contract(state, users[who], program, args, miner, kGas, 1);
        state = s;
        return addr;
    }
};

} // namespace

TEST(CallData, EncodingRoundTrip) {
    CallData cd{"transfer", {arg_u64(5), Bytes{1, 2, 3}}};
    EXPECT_EQ(CallData::decode(cd.encode()), cd);
    EXPECT_THROW(CallData::decode(Bytes{1, 2}), DecodeError);
    EXPECT_EQ(as_u64(arg_u64(77)), 77u);
    EXPECT_THROW(as_u64(Bytes{1}), DomainError);
}

TEST(AccountTx, SerializationAndSigning) {
    World w(1);
    auto tx = make_call_tx(w.state, w.users[0], account_address(crypto::keygen(2)), 5, nullptr, 1000, 1);
    Bytes raw = serialize(tx);
    Reader r(raw);
    EXPECT_EQ(read_account_tx(r), tx);
    EXPECT_TRUE(r.done());
    EXPECT_EQ(tx.sender, account_address(w.users[0]));
    auto forged = tx;
    forged.value = 6;
    EXPECT_THROW(state_transition(w.state, forged, w.miner), TransitionError);
}

TEST(Transition, PlainTransferFeeAndRefund) {
    World w(1);
    Address bob = account_address(crypto::keygen(2));
    const Amount before = w.state.total_balance();
    auto tx = make_call_tx(w.state, w.users[0], bob, 500, nullptr, 1000, 2);
    auto r = w.run(tx);
    ASSERT_TRUE(r.receipt.ok()) << r.receipt.failure;
    const auto size = serialize(tx).size();
    EXPECT_EQ(r.receipt.gas_used, size);
    EXPECT_EQ(r.receipt.fee_paid, static_cast<Amount>(2 * size));
    EXPECT_EQ(w.state.balance_of(bob), 500);
    EXPECT_EQ(w.state.balance_of(w.miner), r.receipt.fee_paid);
    EXPECT_EQ(w.state.total_balance(), before);
    EXPECT_EQ(w.state.nonce_of(account_address(w.users[0])), 1u);
}

TEST(Transition, MalformedAndUnaffordableAreNotIncluded) {
    World w(1, 100);
    auto tx = make_call_tx(w.state, w.users[0], account_address(crypto::keygen(2)), 1, nullptr, 1000, 1);
    try {
        state_transition(w.state, tx, w.miner);
        FAIL();
    } catch (const TransitionError& e) {
        EXPECT_EQ(e.code(), TransitionErrc::InsufficientBalanceForFee);
    }
    auto replay = make_call_tx(w.state, w.users[0], account_address(crypto::keygen(2)), 1, nullptr, 50, 1);
    replay.nonce = 5;
    sign_tx(replay, w.users[0]);
    EXPECT_THROW(state_transition(w.state, replay, w.miner), TransitionError);
}

TEST(Transition, IntrinsicGasFailureKeepsFeeOnly) {
    World w(1);
    auto tx = make_call_tx(w.state, w.users[0], account_address(crypto::keygen(2)), 5, nullptr, 10, 3);
    auto r = w.run(tx);
    EXPECT_FALSE(r.receipt.ok());
    EXPECT_EQ(r.receipt.failure, "IntrinsicGas");
    EXPECT_EQ(r.receipt.fee_paid, 30);
    EXPECT_EQ(w.state.balance_of(account_address(crypto::keygen(2))), 0);
    EXPECT_EQ(w.state.nonce_of(account_address(w.users[0])), 1u);
}

TEST(Token, TransfersEventsAndRevert) {
    World w(2);
    Address token = w.deploy(0, "token", {arg_u64(1000)});
    Address bob = account_address(w.users[1]);
    auto r = w.call(0, token, CallData{"transfer", {arg_address(bob), arg_u64(300)}});
    ASSERT_TRUE(r.receipt.ok()) << r.receipt.failure;
    ASSERT_EQ(r.receipt.events.size(), 1u);
    EXPECT_EQ(r.receipt.events[0].topic, "Transfer");
    EXPECT_EQ(r.receipt.events[0].contract, token);

    auto bal = w.call(1, token, CallData{"balanceOf", {arg_address(bob)}});
    EXPECT_EQ(as_u64(bal.receipt.output), 300u);

    auto before = w.state.find(token)->storage;
    auto fail = w.call(1, token, CallData{"transfer", {arg_address(account_address(w.users[0])), arg_u64(301)}});
    EXPECT_FALSE(fail.receipt.ok());
    EXPECT_NE(fail.receipt.failure.find("Revert"), std::string::npos);
    EXPECT_TRUE(fail.receipt.events.empty());
    EXPECT_EQ(w.state.find(token)->storage, before);
}

TEST(Token, AllowanceFlow) {
    World w(3);
    Address token = w.deploy(0, "token", {arg_u64(100)});
    Address a1 = account_address(w.users[1]), a2 = account_address(w.users[2]);
    EXPECT_TRUE(w.call(0, token, CallData{"approve", {arg_address(a1), arg_u64(40)}}).receipt.ok());
    EXPECT_TRUE(w.call(1, token, CallData{"transferFrom", {arg_address(account_address(w.users[0])),
                                                           arg_address(a2), arg_u64(40)}})
                    .receipt.ok());
    EXPECT_FALSE(w.call(1, token, CallData{"transferFrom", {arg_address(account_address(w.users[0])),
                                                            arg_address(a2), arg_u64(1)}})
                     .receipt.ok());
}

TEST(Gas, OutOfGasRevertsEverythingButFee) {
    World w(1);
    Address token = w.deploy(0, "token", {arg_u64(1000)});
    CallData cd{"transfer", {arg_address(account_address(crypto::keygen(9))), arg_u64(1)}};
    auto tx = make_call_tx(w.state, w.users[0], token, 0, &cd, 0, 1);
    tx.startgas = serialize(tx).size() + 11;  // entry costs 10, storage ops push it over
    sign_tx(tx, w.users[0]);
    auto before = w.state.find(token)->storage;
    auto r = w.run(tx);
    EXPECT_FALSE(r.receipt.ok());
    EXPECT_EQ(r.receipt.failure, "OutOfGas");
    EXPECT_EQ(r.receipt.refund, 0);
    EXPECT_EQ(w.state.find(token)->storage, before);
}

TEST(Contracts, AddressesDeriveFromDeployerAndNonce) {
    World w(1);
    Address expect = contract_address(account_address(w.users[0]), 0);
    EXPECT_EQ(w.deploy(0, "token", {arg_u64(1)}), expect);
    EXPECT_NE(w.deploy(0, "token", {arg_u64(1)}), expect);
    EXPECT_THROW(w.deploy(0, "nonexistent", {}), DomainError);
}

// Train and hotel capacities drawn at random; an order must book both legs or neither.
TEST(BookingOracle, NoMixedBookingsUnderRandomCapacities) {
    std::mt19937_64 rng(2024);
    int mixed = 0, orders = 0;
    for (int round = 0; round < 25; ++round) {
        World w(6);
        std::uint64_t train_cap = rng() % 8, hotel_cap = rng() % 8;
        Address train = w.deploy(0, "train", {arg_u64(train_cap)});
        Address hotel = w.deploy(0, "hotel", {arg_u64(hotel_cap)});
        Address booking = w.deploy(0, "booking", {arg_address(train), arg_address(hotel)});
        std::uint64_t ok = 0;
        for (std::uint64_t id = 1; id <= 12; ++id) {
            int who = static_cast<int>(rng() % 6);
            std::uint64_t order_id = rng() % 3 == 0 ? 1 + rng() % id : id;  // repeats must fail too
            auto r = w.call(who, booking, CallData{"order", {arg_u64(order_id)}});
            ++orders;
            ok += r.receipt.ok();
            std::set<Address> booked;
            for (const auto& e : r.receipt.events)
                if (e.topic == "Booked") booked.insert(e.contract);
            if (booked.size() == 1) ++mixed;
            if (r.receipt.ok()) {
                EXPECT_EQ(booked.size(), 2u);
            }
        }
        auto avail = [&](const Address& c) {
            return as_u64(w.call(0, c, CallData{"available", {}}).receipt.output);
        };
        EXPECT_EQ(train_cap - avail(train), ok);
        EXPECT_EQ(hotel_cap - avail(hotel), ok);
        EXPECT_LE(ok, std::min(train_cap, hotel_cap));
        for (std::uint64_t id = 1; id <= 12; ++id) {
            auto t = w.call(0, train, CallData{"bookerOf", {arg_u64(id)}}).receipt.output;
            auto h = w.call(0, hotel, CallData{"bookerOf", {arg_u64(id)}}).receipt.output;
            EXPECT_EQ(t, h) << id;
            if (t != h) ++mixed;
        }
    }
    EXPECT_GT(orders, 0);
    EXPECT_EQ(mixed, 0);
}

namespace {

// 100 token and plain transfers among ten users, nonces tracked by replaying.
std::vector<AccountTx> hundred_txs(World& w, Address& token) {
    token = w.deploy(0, "token", {arg_u64(1'000'000)});
    std::mt19937_64 rng(11);
    std::vector<AccountTx> txs;
    WorldState s = w.state;
    for (int i = 0; i < 100; ++i) {
        int from = i % 10 == 0 ? 0 : static_cast<int>(rng() % 10);
        Address to = account_address(w.users[rng() % 10]);
        AccountTx tx;
        if (from == 0 && i % 2 == 0) {
            CallData cd{"transfer", {arg_address(to), arg_u64(1 + rng() % 100)}};
            tx = make_call_tx(s, w.users[from], token, 0, &cd, kGas, 1);
        } else {
            tx = make_call_tx(s, w.users[from], to, static_cast<Amount>(1 + rng() % 1000), nullptr, 5000, 1);
        }
        s = state_transition(s, tx, w.miner).state;
        txs.push_back(tx);
    }
    return txs;
}

} // namespace

TEST(AccountChain, HundredTransactionBlockValidates) {
    World w(10);
    Address token;
    auto txs = hundred_txs(w, token);
    AccountChain chain({}, w.state);
    std::vector<std::pair<std::size_t, std::string>> rejected;
    auto b = chain.produce_block(txs, w.miner, chain.params().genesis_time + 10, &rejected);
    EXPECT_TRUE(rejected.empty());
    ASSERT_EQ(b.transactions.size(), 100u);
    const auto now = b.header.timestamp;
    EXPECT_FALSE(chain.validate(b, now));
    chain.append(b, now);
    EXPECT_EQ(chain.height(), 1u);
    EXPECT_EQ(chain.state().state_root(), b.header.state_root);
    EXPECT_EQ(chain.receipts(1).size(), 100u);
    EXPECT_EQ(chain.state().total_balance(), w.state.total_balance());
}

TEST(AccountChain, StateRootOmittingOneTransactionFailsAtStepFive) {
    World w(10);
    Address token;
    auto txs = hundred_txs(w, token);
    AccountChain chain({}, w.state);
    auto full = chain.produce_block(txs, w.miner, chain.params().genesis_time + 10);
    auto short_txs = txs;
    short_txs.pop_back();
    auto partial = chain.produce_block(short_txs, w.miner, chain.params().genesis_time + 10);
    auto bad = full;
    bad.header.state_root = partial.header.state_root;
    auto err = chain.validate(bad, bad.header.timestamp);
    ASSERT_TRUE(err);
    EXPECT_EQ(err->step, ValidationStep::StateRoot);
    EXPECT_THROW(chain.append(bad, bad.header.timestamp), DomainError);
}

TEST(AccountChain, EarlierStepsRejectFirst) {
    World w(2);
    AccountChain chain({}, w.state);
    auto tx = make_call_tx(w.state, w.users[0], account_address(w.users[1]), 5, nullptr, 5000, 1);
    auto b = chain.produce_block({tx}, w.miner, chain.params().genesis_time + 10);
    const auto now = b.header.timestamp;

    auto x = b;
    x.header.prev_hash.bytes[3] ^= 1;
    EXPECT_EQ(chain.validate(x, now)->step, ValidationStep::ParentLink);

    x = b;
    x.header.timestamp = chain.params().genesis_time;
    EXPECT_EQ(chain.validate(x, now)->step, ValidationStep::Timestamp);
    EXPECT_EQ(chain.validate(b, b.header.timestamp - 15 * 60)->step, ValidationStep::Timestamp);

    x = b;
    x.transactions.push_back(tx);  // tx root no longer matches
    EXPECT_EQ(chain.validate(x, now)->step, ValidationStep::ProofOfWork);

    AccountBlock replayed = chain.produce_block({}, w.miner, chain.params().genesis_time + 10);
    replayed.transactions = {tx, tx};  // same nonce twice
    replayed.header.tx_root = compute_tx_root(replayed.transactions);
    EXPECT_EQ(chain.validate(replayed, now)->step, ValidationStep::Replay);
}

TEST(AccountChain, ProducerDropsInvalidTransactions) {
    World w(2);
    AccountChain chain({}, w.state);
    auto good = make_call_tx(w.state, w.users[0], account_address(w.users[1]), 5, nullptr, 5000, 1);
    auto forged = good;
    forged.value = 999;
    std::vector<std::pair<std::size_t, std::string>> rejected;
    auto b = chain.produce_block({forged, good}, w.miner, chain.params().genesis_time + 1, &rejected);
    EXPECT_EQ(b.transactions.size(), 1u);
    ASSERT_EQ(rejected.size(), 1u);
    EXPECT_EQ(rejected[0].first, 0u);
}

TEST(WorldState, RootChangesWithAnyField) {
    World w(2);
    auto r0 = w.state.state_root();
    auto s = w.state;
    s.at(account_address(w.users[0])).nonce += 1;
    EXPECT_NE(s.state_root(), r0);
    s = w.state;
    s.at(account_address(w.users[1])).balance -= 1;
    EXPECT_NE(s.state_root(), r0);
    EXPECT_EQ(WorldState{}.state_root(), crypto::sha256d(Bytes{}));
}
