#include "bcw/account/transition.hpp"

#include <limits>

#include "bcw/crypto/hash.hpp"

namespace bcw::account {

namespace {

void write_addr(Writer& w, const Address& a) { w.raw(ByteView(a.payload.data(), a.payload.size())); }

const crypto::CurveParams& curve_of(const TransitionConfig& cfg) {
    return cfg.curve ? *cfg.curve : *crypto::secp256k1();
}

[[noreturn]] void malformed(const std::string& why) { throw TransitionError(TransitionErrc::Malformed, why); }

} // namespace

void write_account_tx(Writer& w, const AccountTx& tx) {
    write_addr(w, tx.sender);
    write_addr(w, tx.receiver);
    w.i64(tx.value).var_bytes(tx.data).u64(tx.startgas).u64(tx.gasprice).u64(tx.nonce);
    w.bigint(tx.pubkey.x).bigint(tx.pubkey.y).bigint(tx.signature.r).bigint(tx.signature.s);
}

AccountTx read_account_tx(Reader& r) {
    AccountTx tx;
    tx.sender = Address::from_payload(r.raw(20));
    tx.receiver = Address::from_payload(r.raw(20));
    tx.value = r.i64();
    tx.data = r.var_bytes();
    tx.startgas = r.u64();
    tx.gasprice = r.u64();
    tx.nonce = r.u64();
    BigInt x = r.bigint();
    BigInt y = r.bigint();
    tx.pubkey = crypto::CurvePoint::affine(std::move(x), std::move(y));
    tx.signature.r = r.bigint();
    tx.signature.s = r.bigint();
    return tx;
}

Bytes serialize(const AccountTx& tx) {
    Writer w;
    write_account_tx(w, tx);
    return std::move(w).take();
}

HashDigest tx_hash(const AccountTx& tx) { return crypto::sha256d(serialize(tx)); }

HashDigest signing_digest(const AccountTx& tx) {
    AccountTx blank = tx;
    blank.signature = {};
    return crypto::sha256d(serialize(blank));
}

void sign_tx(AccountTx& tx, const crypto::KeyPair& key) {
    tx.pubkey = key.pub;
    tx.sender = crypto::derive_address(key.pub, *key.curve);
    tx.signature = crypto::sign(key, signing_digest(tx).view());
}

Address contract_address(const Address& deployer, std::uint64_t nonce) {
    Writer w;
    write_addr(w, deployer);
    w.u64(nonce);
    auto h = crypto::hash160(w.data());
    return Address::from_payload(ByteView(h.data(), h.size()));
}

Address account_address(const crypto::KeyPair& key) { return crypto::derive_address(key.pub, *key.curve); }

TransitionResult state_transition(const WorldState& state, const AccountTx& tx, const Address& miner,
                                  const TransitionConfig& cfg) {
    const auto& curve = curve_of(cfg);

    // Step 1: well-formedness.
    if (tx.value < 0) malformed("negative value");
    if (tx.startgas == 0) malformed("startgas must be positive");
    if (tx.pubkey.infinity || !curve.on_curve(tx.pubkey)) malformed("public key not on curve");
    if (crypto::derive_address(tx.pubkey, curve) != tx.sender) malformed("public key does not match sender");
    if (!crypto::verify(curve, tx.pubkey, signing_digest(tx).view(), tx.signature)) malformed("bad signature");
    if (tx.nonce != state.nonce_of(tx.sender))
        malformed("nonce " + std::to_string(tx.nonce) + " != expected " + std::to_string(state.nonce_of(tx.sender)));
    constexpr auto kMax = static_cast<std::uint64_t>(std::numeric_limits<Amount>::max());
    if (tx.gasprice != 0 && tx.startgas > kMax / tx.gasprice) malformed("fee overflows");

    // Step 2: prepay the whole gas allowance.
    const auto fee = static_cast<Amount>(tx.startgas * tx.gasprice);
    if (state.balance_of(tx.sender) < fee)
        throw TransitionError(TransitionErrc::InsufficientBalanceForFee,
                              "balance " + std::to_string(state.balance_of(tx.sender)) + " < fee " + std::to_string(fee));
    WorldState s = state;
    {
        Account& sender = s.at(tx.sender);
        sender.balance -= fee;
        sender.nonce += 1;
    }
    const WorldState checkpoint = s;

    TransitionResult out;
    Receipt& rc = out.receipt;
    rc.tx_hash = tx_hash(tx);

    auto fail = [&](std::string why) {
        // Step 5: everything but the fee is undone; all gas is forfeited.
        s = checkpoint;
        rc.status = ReceiptStatus::Failed;
        rc.failure = std::move(why);
        rc.gas_used = tx.startgas;
        rc.fee_paid = fee;
        rc.refund = 0;
        rc.events.clear();
        rc.created.reset();
        rc.output.clear();
    };

    // Step 3: per-byte intrinsic gas.
    const std::uint64_t intrinsic = cfg.gas.per_byte * serialize(tx).size();
    if (intrinsic > tx.startgas) {
        fail("IntrinsicGas");
    } else {
        // Step 4: value transfer and execution.
        const std::uint64_t budget = tx.startgas - intrinsic;
        ExecContext ctx(s, *cfg.registry, cfg.gas, budget, tx.sender);
        try {
            if (s.balance_of(tx.sender) < tx.value) throw Revert("InsufficientValue");
            s.at(tx.sender).balance -= tx.value;
            if (tx.is_create()) {
                const CallData init = CallData::decode(tx.data);
                if (!cfg.registry->find(init.function)) throw Revert("UnknownProgram " + init.function);
                const Address addr = contract_address(tx.sender, tx.nonce);
                if (s.contains(addr)) throw Revert("contract address already in use");
                Account& c = s.at(addr);
                c.kind = AccountKind::Contract;
                c.program_id = init.function;
                c.balance = tx.value;
                rc.created = addr;
                rc.output = ctx.enter(tx.sender, addr, CallData{"init", init.args}, tx.value);
            } else {
                Account& recv = s.at(tx.receiver);
                recv.balance += tx.value;
                if (recv.kind == AccountKind::Contract && !tx.data.empty())
                    rc.output = ctx.enter(tx.sender, tx.receiver, CallData::decode(tx.data), tx.value);
            }
            rc.events = ctx.events();
            // Step 6: refund what was not burned.
            rc.gas_used = intrinsic + ctx.gas_used();
            rc.fee_paid = static_cast<Amount>(rc.gas_used * tx.gasprice);
            rc.refund = fee - rc.fee_paid;
            s.at(tx.sender).balance += rc.refund;
        } catch (const OutOfGas&) {
            fail("OutOfGas");
        } catch (const Revert& e) {
            fail(std::string("Revert: ") + e.what());
        } catch (const DomainError& e) {
            fail(std::string("Revert: ") + e.what());
        }
    }
    if (rc.fee_paid > 0) s.at(miner).balance += rc.fee_paid;
    out.state = std::move(s);
    return out;
}

AccountTx make_call_tx(const WorldState& state, const crypto::KeyPair& key, const Address& to, Amount value,
                       const CallData* call, std::uint64_t startgas, std::uint64_t gasprice) {
    AccountTx tx;
    tx.sender = account_address(key);
    tx.receiver = to;
    tx.value = value;
    if (call) tx.data = call->encode();
    tx.startgas = startgas;
    tx.gasprice = gasprice;
    tx.nonce = state.nonce_of(tx.sender);
    sign_tx(tx, key);
    return tx;
}

AccountTx make_deploy_tx(const WorldState& state, const crypto::KeyPair& key, const std::string& program_id,
                         const std::vector<Bytes>& init_args, std::uint64_t startgas, std::uint64_t gasprice) {
    const CallData init{program_id, init_args};
    return make_call_tx(state, key, Address{}, 0, &init, startgas, gasprice);
}

std::pair<WorldState, Address> deploy_contract(const WorldState& state, const crypto::KeyPair& deployer,
                                               const std::string& program_id, const std::vector<Bytes>& init_args,
                                               const Address& miner, std::uint64_t startgas, std::uint64_t gasprice,
                                               const TransitionConfig& cfg) {
    auto tx = make_deploy_tx(state, deployer, program_id, init_args, startgas, gasprice);
    auto res = state_transition(state, tx, miner, cfg);
    if (!res.receipt.ok()) throw DomainError("DeployFailed", res.receipt.failure);
    return {std::move(res.state), *res.receipt.created};
}

} // namespace bcw::account
