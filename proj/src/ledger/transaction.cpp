#include "bcw/ledger/transaction.hpp"

#include "bcw/crypto/hash.hpp"

namespace bcw::ledger {

namespace {

constexpr std::uint32_t kTxVersion = 1;
// digest + index + 4 single-byte length prefixes
constexpr std::size_t kMinInputSize = 32 + 4 + 4;
constexpr std::size_t kOutputSize = 8 + 20;

void write_input(Writer& w, const TxInput& in) {
    w.digest(in.outpoint.txid).u32(in.outpoint.index);
    w.bigint(in.pubkey.x).bigint(in.pubkey.y);
    w.bigint(in.signature.r).bigint(in.signature.s);
}

TxInput read_input(Reader& r) {
    TxInput in;
    in.outpoint.txid = r.digest();
    in.outpoint.index = r.u32();
    BigInt x = r.bigint();
    BigInt y = r.bigint();
    in.pubkey = crypto::CurvePoint::affine(std::move(x), std::move(y));
    in.signature.r = r.bigint();
    in.signature.s = r.bigint();
    return in;
}

} // namespace

std::string OutPoint::str() const { return txid.hex() + ":" + std::to_string(index); }

Amount UtxoTransaction::total_out() const {
    Amount total = 0;
    for (const auto& o : outputs) total += o.amount;
    return total;
}

void write_tx(Writer& w, const UtxoTransaction& tx) {
    w.u32(kTxVersion);
    w.u32(static_cast<std::uint32_t>(tx.inputs.size()));
    for (const auto& in : tx.inputs) write_input(w, in);
    w.u32(static_cast<std::uint32_t>(tx.outputs.size()));
    for (const auto& out : tx.outputs) {
        w.i64(out.amount);
        w.raw(ByteView(out.recipient.payload.data(), out.recipient.payload.size()));
    }
    if (tx.is_coinbase()) w.u64(tx.coinbase_height).u64(tx.coinbase_nonce);
}

UtxoTransaction read_tx(Reader& r) {
    if (r.u32() != kTxVersion) throw DecodeError("unknown transaction version");
    UtxoTransaction tx;
    auto n_in = r.count(kMinInputSize);
    tx.inputs.reserve(n_in);
    for (std::uint32_t i = 0; i < n_in; ++i) tx.inputs.push_back(read_input(r));
    auto n_out = r.count(kOutputSize);
    tx.outputs.reserve(n_out);
    for (std::uint32_t i = 0; i < n_out; ++i) {
        TxOutput out;
        out.amount = r.i64();
        out.recipient = crypto::Address::from_payload(r.raw(20));
        tx.outputs.push_back(out);
    }
    if (tx.is_coinbase()) {
        tx.coinbase_height = r.u64();
        tx.coinbase_nonce = r.u64();
    }
    return tx;
}

Bytes serialize(const UtxoTransaction& tx) {
    Writer w;
    write_tx(w, tx);
    return std::move(w).take();
}

UtxoTransaction deserialize_tx(ByteView data) {
    Reader r(data);
    auto tx = read_tx(r);
    r.expect_done();
    return tx;
}

HashDigest txid(const UtxoTransaction& tx) { return crypto::sha256d(serialize(tx)); }

HashDigest signing_digest(const UtxoTransaction& tx) {
    UtxoTransaction blank = tx;
    for (auto& in : blank.inputs) in.signature = {};
    return crypto::sha256d(serialize(blank));
}

void sign_input(UtxoTransaction& tx, std::size_t index, const crypto::KeyPair& key) {
    tx.inputs.at(index).pubkey = key.pub;
    auto digest = signing_digest(tx);
    tx.inputs[index].signature = crypto::sign(key, digest.view());
}

} // namespace bcw::ledger
