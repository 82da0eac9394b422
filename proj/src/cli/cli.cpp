#include "bcw/cli/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include "bcw/analysis/finality.hpp"
#include "bcw/analysis/security.hpp"
#include "bcw/chain/chain.hpp"
#include "bcw/chain/pow.hpp"
#include "bcw/chain/snapshot.hpp"
#include "bcw/common/error.hpp"
#include "bcw/crypto/address.hpp"
#include "bcw/crypto/ecdsa.hpp"
#include "bcw/crypto/hash.hpp"
#include "bcw/interop/bridge.hpp"
#include "bcw/interop/swap.hpp"
#include "bcw/ledger/wallet.hpp"
#include "bcw/netsim/simulator.hpp"
#include "bcw/plasma/scenario.hpp"

namespace bcw::cli {

namespace fs = std::filesystem;
using ojson = nlohmann::ordered_json;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(const char* pattern, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, pattern, v);
    return buf;
}

// shortest text that reads back to the same double
std::string shortest(double v) {
    char buf[64];
    auto r = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, r.ptr);
}

std::string dump(const ojson& j) { return j.dump(2) + "\n"; }

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DomainError("IoError", "cannot read " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// One artifact of a command. The first one is also printed to stdout.
struct Artifact {
    std::string name;
    std::string content;
};

struct Output {
    std::vector<Artifact> artifacts;
    std::uint64_t seed = 0;
};

enum class Format { Text, Json, Csv };

struct Globals {
    std::uint64_t seed = 1;
    bool seed_given = false;
    std::string out_dir;
    std::optional<Format> format;
    std::string config_path;
};

Format resolve(const Globals& g, Format fallback, std::initializer_list<Format> allowed) {
    Format f = g.format.value_or(fallback);
    for (Format a : allowed)
        if (a == f) return f;
    throw UsageError("this command does not support the requested --format");
}

std::string ext(Format f) {
    switch (f) {
    case Format::Json: return "json";
    case Format::Csv: return "csv";
    case Format::Text: break;
    }
    return "txt";
}

// ---- ledger helpers --------------------------------------------------------

std::pair<std::string, ledger::Amount> parse_label_amount(const std::string& s) {
    auto colon = s.rfind(':');
    if (colon == std::string::npos || colon == 0)
        throw UsageError("expected label:amount, got '" + s + "'");
    return {s.substr(0, colon), parse_coin_amount(std::string_view(s).substr(colon + 1))};
}

struct Wallets {
    std::map<std::string, crypto::KeyPair> keys;
    std::map<crypto::Address, std::string> names;
    ledger::UtxoSet state;

    const crypto::KeyPair& key(const std::string& label) {
        auto it = keys.find(label);
        if (it == keys.end()) {
            it = keys.emplace(label, crypto::keypair_from_label(label)).first;
            names[ledger::address_of(it->second)] = label;
        }
        return it->second;
    }
    crypto::Address addr(const std::string& label) { return ledger::address_of(key(label)); }
    std::string name(const crypto::Address& a) const {
        auto it = names.find(a);
        return it == names.end() ? a.encoded() : it->second;
    }
};

// Each --fund becomes its own zero-input mint so every funding has a distinct txid.
Wallets fund_wallets(const std::vector<std::string>& funds) {
    Wallets w;
    std::uint64_t tag = 1;
    for (const auto& f : funds) {
        auto [label, amount] = parse_label_amount(f);
        ledger::UtxoTransaction mint;
        mint.outputs.push_back({amount, w.addr(label)});
        mint.coinbase_height = tag++;
        ledger::apply_unchecked(mint, w.state);
    }
    return w;
}

std::string format_amount(ledger::Amount a) { return plasma::format_coin(a); }

ojson tx_json(const ledger::UtxoTransaction& tx, const Wallets& w, const ledger::UtxoSet& before) {
    ojson j;
    j["txid"] = ledger::txid(tx).hex();
    Bytes raw = ledger::serialize(tx);
    j["size"] = raw.size();
    ojson ins = ojson::array();
    for (const auto& in : tx.inputs) {
        const auto* prev = before.find(in.outpoint);
        ojson e;
        e["outpoint"] = in.outpoint.str();
        if (prev) {
            e["owner"] = w.name(prev->recipient);
            e["amount"] = format_amount(prev->amount);
        }
        ins.push_back(e);
    }
    j["inputs"] = ins;
    ojson outs = ojson::array();
    for (const auto& o : tx.outputs)
        outs.push_back(ojson{{"recipient", w.name(o.recipient)},
                             {"address", o.recipient.encoded()},
                             {"amount", format_amount(o.amount)}});
    j["outputs"] = outs;
    j["fee"] = format_amount(ledger::tx_fee(tx, before));
    auto err = ledger::validate_tx(tx, before);
    j["valid"] = !err.has_value();
    if (err) j["error"] = err->describe();
    j["hex"] = to_hex(raw);
    return j;
}

std::string tx_text(const ojson& j) {
    std::ostringstream s;
    s << "txid " << j["txid"].get<std::string>() << " (" << j["size"].get<std::size_t>() << " bytes)\n";
    for (const auto& in : j["inputs"])
        s << "  in  " << in["outpoint"].get<std::string>() << " "
          << in.value("owner", std::string("?")) << " " << in.value("amount", std::string("?")) << "\n";
    for (const auto& o : j["outputs"])
        s << "  out " << o["recipient"].get<std::string>() << " " << o["amount"].get<std::string>() << "\n";
    s << "  fee " << j["fee"].get<std::string>() << (j["valid"].get<bool>() ? " valid\n" : " INVALID\n");
    return s.str();
}

Output emit_tx(const Globals& g, const ledger::UtxoTransaction& tx, const Wallets& w) {
    Format f = resolve(g, Format::Json, {Format::Json, Format::Text});
    ojson j = tx_json(tx, w, w.state);
    return {{{"tx." + ext(f), f == Format::Json ? dump(j) : tx_text(j)}}, g.seed};
}

// name=v1,v2 for options given on the command line, skipping --out and
// --config (the file contents are hashed instead).
void collect_options(const CLI::App& a, std::vector<std::string>& acc) {
    for (const CLI::Option* o : a.get_options()) {
        if (o->count() == 0) continue;
        const auto name = o->get_name();
        if (name == "--out" || name == "--config") continue;
        std::string item = name + "=";
        for (const auto& r : o->results()) item += r + ",";
        acc.push_back(item);
    }
    for (const CLI::App* sub : a.get_subcommands()) collect_options(*sub, acc);
}

HashDigest parse_digest(const std::string& hex) {
    try {
        return HashDigest::from_hex(hex);
    } catch (const DomainError&) {
        throw;
    } catch (const std::exception& e) {
        throw DomainError("BadHex", e.what());
    }
}

chain::ChainParams mineable_params(const std::string& name) {
    auto p = chain::ChainParams::by_name(name);
    if (name == "mainnet") throw UsageError("mining is only supported on regtest and sim parameters");
    return p;
}

// ---- analysis helpers ------------------------------------------------------

ojson constants_json() {
    return ojson{{"honest_threshold", analysis::kHonestThreshold}, {"hash_bits", 256}};
}

} // namespace

std::int64_t parse_coin_amount(std::string_view text) {
    auto bad = [&] { return DomainError("BadAmount", "not a coin amount: '" + std::string(text) + "'"); };
    if (text.empty()) throw bad();
    std::size_t dot = text.find('.');
    std::string_view whole = text.substr(0, dot);
    std::string_view frac = dot == std::string_view::npos ? std::string_view{} : text.substr(dot + 1);
    if (whole.empty() || whole.size() > 8 || frac.size() > 8) throw bad();
    if (dot != std::string_view::npos && frac.empty()) throw bad();
    std::int64_t units = 0;
    for (char c : whole) {
        if (c < '0' || c > '9') throw bad();
        units = units * 10 + (c - '0');
    }
    std::int64_t f = 0;
    for (std::size_t i = 0; i < 8; ++i) {
        char c = i < frac.size() ? frac[i] : '0';
        if (c < '0' || c > '9') throw bad();
        f = f * 10 + (c - '0');
    }
    std::int64_t total = units * ledger::kCoin + f;
    if (total <= 0 || total > ledger::kMaxMoney) throw bad();
    return total;
}

std::string RunManifest::to_json() const {
    ojson j;
    j["command"] = command;
    j["config_digest"] = config_digest;
    j["seed"] = seed;
    j["tool_version"] = tool_version;
    j["outputs"] = outputs;
    return dump(j);
}

RunManifest RunManifest::from_json(std::string_view text) {
    try {
        auto j = ojson::parse(text);
        if (!j.is_object()) throw DomainError("BadManifest", "not an object");
        for (const char* k : {"command", "config_digest", "seed", "tool_version", "outputs"})
            if (!j.contains(k)) throw DomainError("BadManifest", std::string("missing field ") + k);
        RunManifest m;
        for (auto it = j.begin(); it != j.end(); ++it) {
            const auto& k = it.key();
            if (k == "command") m.command = it->get<std::string>();
            else if (k == "config_digest") m.config_digest = it->get<std::string>();
            else if (k == "seed") m.seed = it->get<std::uint64_t>();
            else if (k == "tool_version") m.tool_version = it->get<std::string>();
            else if (k == "outputs") m.outputs = it->get<std::vector<std::string>>();
            else throw DomainError("BadManifest", "unknown field " + k);
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw DomainError("BadManifest", e.what());
    }
}

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Blockchain workbench", "bcw"};
    app.require_subcommand(1);
    app.fallthrough();
    app.set_version_flag("--version", std::string(kToolVersion));

    Globals g;
    std::string format_name;
    app.add_option("--seed", g.seed, "Seed for every random choice");
    app.add_option("--out", g.out_dir, "Directory for artifacts and manifest.json");
    app.add_option("--format", format_name, "Output format")
        ->check(CLI::IsMember({"json", "csv", "text"}));
    app.add_option("--config", g.config_path, "JSON config file");

    std::map<CLI::App*, std::function<Output()>> handlers;
    std::map<CLI::App*, std::string> names;
    auto leaf = [&](CLI::App* parent, const std::string& name, const std::string& desc,
                    const std::string& full) {
        CLI::App* c = parent->add_subcommand(name, desc);
        names[c] = full;
        return c;
    };

    // keygen
    std::string key_label, curve_name = "secp256k1";
    CLI::App* keygen = leaf(&app, "keygen", "Derive a key pair and address", "keygen");
    keygen->add_option("--label", key_label, "Derive from a label instead of --seed");
    keygen->add_option("--curve", curve_name, "secp256k1, large, toy17, toy10007 or toy:<p>");
    handlers[keygen] = [&]() -> Output {
        Format f = resolve(g, Format::Json, {Format::Json, Format::Text});
        auto curve = crypto::curve_by_name(curve_name);
        auto kp = key_label.empty() ? crypto::keygen(g.seed, curve) : crypto::keypair_from_label(key_label, curve);
        auto addr = crypto::derive_address(kp.pub, *curve);
        ojson j;
        j["curve"] = curve->name;
        if (key_label.empty()) j["seed"] = g.seed;
        else j["label"] = key_label;
        j["secret"] = bigint_to_hex(kp.secret);
        j["public"] = to_hex(crypto::encode_point_compressed(kp.pub, *curve));
        j["address"] = addr.encoded();
        std::string text = "address " + addr.encoded() + "\npublic  " + j["public"].get<std::string>() +
                           "\nsecret  " + j["secret"].get<std::string>() + "\n";
        return {{{"key." + ext(f), f == Format::Json ? dump(j) : text}}, g.seed};
    };

    // tx
    CLI::App* tx = app.add_subcommand("tx", "Build and validate transactions");
    tx->require_subcommand(1);
    std::vector<std::string> funds, pays, contribs;
    std::string from, to, amount_text, fee_text = "0";
    auto fee = [&] { return fee_text == "0" ? ledger::Amount{0} : parse_coin_amount(fee_text); };

    CLI::App* tx_create = leaf(tx, "create", "Pay one or more recipients", "tx create");
    tx_create->add_option("--fund", funds, "Mint label:amount into the starting state")->required();
    tx_create->add_option("--from", from, "Sender label")->required();
    tx_create->add_option("--pay", pays, "Recipient label:amount")->required();
    tx_create->add_option("--fee", fee_text, "Fee in coins");
    handlers[tx_create] = [&]() -> Output {
        Wallets w = fund_wallets(funds);
        std::vector<ledger::Payment> payments;
        for (const auto& p : pays) {
            auto [label, amount] = parse_label_amount(p);
            payments.emplace_back(w.addr(label), amount);
        }
        return emit_tx(g, ledger::build_transfer(w.key(from), payments, w.state, fee()), w);
    };

    CLI::App* tx_cons = leaf(tx, "consolidate", "Merge every output of one owner", "tx consolidate");
    tx_cons->add_option("--fund", funds, "Mint label:amount into the starting state")->required();
    tx_cons->add_option("--from", from, "Owner label")->required();
    tx_cons->add_option("--fee", fee_text, "Fee in coins");
    handlers[tx_cons] = [&]() -> Output {
        Wallets w = fund_wallets(funds);
        return emit_tx(g, ledger::build_consolidation(w.key(from), w.state, fee()), w);
    };

    CLI::App* tx_joint = leaf(tx, "joint", "Several payers fund one payment", "tx joint");
    tx_joint->add_option("--fund", funds, "Mint label:amount into the starting state")->required();
    tx_joint->add_option("--contrib", contribs, "Contributing label; all of its outputs are spent")->required();
    tx_joint->add_option("--to", to, "Recipient label")->required();
    tx_joint->add_option("--amount", amount_text, "Payment in coins")->required();
    handlers[tx_joint] = [&]() -> Output {
        Wallets w = fund_wallets(funds);
        std::vector<crypto::KeyPair> keys;
        std::vector<ledger::OutPoint> ops;
        for (const auto& c : contribs) {
            keys.push_back(w.key(c));
            for (const auto& [op, _] : w.state.owned_by(w.addr(c))) ops.push_back(op);
        }
        auto t = ledger::build_joint_payment(keys, ops, w.addr(to), parse_coin_amount(amount_text), w.state);
        return emit_tx(g, t, w);
    };

    CLI::App* tx_walk = leaf(tx, "walkthrough", "Replay the four-party UTXO example", "tx walkthrough");
    handlers[tx_walk] = [&]() -> Output {
        Format f = resolve(g, Format::Text, {Format::Json, Format::Text});
        auto wt = ledger::replay_four_party_example();
        std::map<crypto::Address, std::string> names;
        for (const auto& [n, k] : wt.parties) names[ledger::address_of(k)] = n;
        auto name = [&](const crypto::Address& a) {
            auto it = names.find(a);
            return it == names.end() ? a.encoded() : it->second;
        };
        ojson j;
        ojson steps = ojson::array();
        std::ostringstream text;
        for (const auto& st : wt.steps) {
            steps.push_back(ojson{{"label", st.label},
                                  {"txid", ledger::txid(st.tx).hex()},
                                  {"spent", st.spent},
                                  {"created", st.created}});
            text << st.label << ": spends";
            for (int n : st.spent) text << " #" << n;
            text << " creates";
            for (int n : st.created) text << " #" << n;
            text << "\n";
        }
        j["steps"] = steps;
        ojson utxos = ojson::array();
        for (const auto& [n, op] : wt.numbered) {
            const auto* o = wt.state.find(op);
            bool spent = wt.spent.at(n);
            ojson e{{"utxo", n}, {"spent", spent}};
            if (o) e["owner"] = name(o->recipient), e["amount"] = format_amount(o->amount);
            utxos.push_back(e);
            if (o) text << "#" << n << " unspent " << name(o->recipient) << " " << format_amount(o->amount) << "\n";
            else text << "#" << n << " spent\n";
        }
        j["utxos"] = utxos;
        j["total"] = format_amount(wt.state.total_value());
        text << "total " << format_amount(wt.state.total_value()) << "\n";
        return {{{"walkthrough." + ext(f), f == Format::Json ? dump(j) : text.str()}}, g.seed};
    };

    // mine
    std::string params_name = "regtest", miner_label;
    std::uint64_t n_blocks = 10;
    CLI::App* mine = leaf(&app, "mine", "Mine a fresh chain from genesis", "mine");
    mine->add_option("--params", params_name, "regtest or sim");
    mine->add_option("--blocks", n_blocks, "Blocks to mine")->check(CLI::Range(1, 100000));
    mine->add_option("--miner", miner_label, "Miner label (default: key from --seed)");
    handlers[mine] = [&]() -> Output {
        Format f = resolve(g, Format::Json, {Format::Json, Format::Text});
        chain::ChainView view(mineable_params(params_name));
        auto key = miner_label.empty() ? crypto::keygen(g.seed) : crypto::keypair_from_label(miner_label);
        auto miner = ledger::address_of(key);
        std::uint64_t tries = 0;
        for (std::uint64_t i = 1; i <= n_blocks; ++i) {
            std::uint32_t ts = view.params().genesis_time +
                               static_cast<std::uint32_t>(i * view.params().target_block_interval);
            auto res = chain::mine_block(view.make_template(miner, {}, ts), view.next_target());
            if (!res.block) throw DomainError("MiningExhausted", "no nonce found at height " + std::to_string(i));
            tries += res.tries;
            view.append(*res.block);
        }
        ojson j;
        j["params"] = view.params().name;
        j["height"] = view.height();
        j["tip"] = view.tip_id().hex();
        j["miner"] = miner.encoded();
        j["tries"] = tries;
        j["snapshot"] = g.out_dir.empty() ? ojson(nullptr) : ojson("chain.bcw");
        std::string text = "mined " + std::to_string(n_blocks) + " blocks, tip " + view.tip_id().hex() +
                           ", " + std::to_string(tries) + " tries\n";
        Output o{{{"mine." + ext(f), f == Format::Json ? dump(j) : text}}, g.seed};
        Bytes snap = chain::encode_snapshot(view.blocks());
        o.artifacts.push_back({"chain.bcw", std::string(snap.begin(), snap.end())});
        return o;
    };

    // chain
    CLI::App* chain_cmd = app.add_subcommand("chain", "Revalidate a chain snapshot");
    chain_cmd->require_subcommand(1);
    std::string snapshot_path, expected_tip;
    auto audit = [&](bool with_tip) -> Output {
        Format f = resolve(g, Format::Text, {Format::Json, Format::Text});
        auto blocks = chain::load_snapshot(snapshot_path);
        auto params = chain::ChainParams::by_name(params_name);
        std::optional<HashDigest> tip;
        if (with_tip) tip = parse_digest(expected_tip);
        auto failure = chain::audit_chain(blocks, params, tip);
        if (failure) {
            throw DomainError(std::string(chain::to_string(failure->error.code)),
                              "block " + std::to_string(failure->height) + ": " + failure->error.describe());
        }
        ojson j{{"valid", true},
                {"params", params.name},
                {"height", blocks.empty() ? 0 : blocks.size() - 1},
                {"tip", blocks.empty() ? "" : chain::block_id(blocks.back().header).hex()}};
        std::string text = "valid: height " + std::to_string(j["height"].get<std::size_t>()) + " tip " +
                           j["tip"].get<std::string>() + "\n";
        return {{{"audit." + ext(f), f == Format::Json ? dump(j) : text}}, g.seed};
    };
    CLI::App* validate = leaf(chain_cmd, "validate", "Full revalidation from genesis", "chain validate");
    validate->add_option("--file", snapshot_path, "Snapshot file")->required();
    validate->add_option("--params", params_name, "Chain parameters");
    handlers[validate] = [&] { return audit(false); };
    CLI::App* audit_cmd = leaf(chain_cmd, "audit", "Revalidate and pin the tip id", "chain audit");
    audit_cmd->add_option("--file", snapshot_path, "Snapshot file")->required();
    audit_cmd->add_option("--expected-tip", expected_tip, "Hex block id the tip must have")->required();
    audit_cmd->add_option("--params", params_name, "Chain parameters");
    handlers[audit_cmd] = [&] { return audit(true); };

    // sim
    CLI::App* sim = app.add_subcommand("sim", "Network simulation");
    sim->require_subcommand(1);
    bool trace = false;
    CLI::App* sim_run = leaf(sim, "run", "Run one simulation", "sim run");
    sim_run->add_flag("--trace", trace, "Write a per-round trace");
    handlers[sim_run] = [&]() -> Output {
        Format f = resolve(g, Format::Json, {Format::Json, Format::Csv});
        netsim::SimConfig cfg = g.config_path.empty() ? netsim::SimConfig{}
                                                      : netsim::config_from_json(read_file(g.config_path));
        if (g.seed_given) cfg.seed = g.seed;
        cfg.trace = cfg.trace || trace;
        auto res = netsim::run(cfg);
        std::string body = f == Format::Json ? res.metrics.to_json()
                                             : netsim::SimMetrics::csv_header() + "\n" + res.metrics.csv_row() + "\n";
        Output o{{{"metrics." + ext(f), body}}, cfg.seed};
        if (cfg.trace) {
            std::string t;
            for (const auto& line : res.trace) t += line + "\n";
            o.artifacts.push_back({"trace.log", t});
        }
        return o;
    };

    // analyze
    CLI::App* analyze = app.add_subcommand("analyze", "Security formulas");
    analyze->require_subcommand(1);
    std::vector<double> qs;
    std::vector<int> ks;
    double eps = 0.1, delta = 2, threshold = analysis::kHonestThreshold, p = -1;
    int n_nodes = 100;

    CLI::App* fin = leaf(analyze, "finality", "Attacker catch-up probability after k blocks", "analyze finality");
    fin->add_option("--q", qs, "Attacker hashrate share (repeatable)")->required();
    fin->add_option("--k", ks, "Confirmations (repeatable)")->required();
    handlers[fin] = [&]() -> Output {
        Format f = resolve(g, Format::Text, {Format::Json, Format::Csv, Format::Text});
        auto rows = analysis::finality_table(ks, qs);
        std::string body;
        if (f == Format::Json) {
            ojson j;
            j["constants"] = constants_json();
            j["model"] = "zero head start; attacker wins ties";
            ojson arr = ojson::array();
            for (const auto& r : rows)
                arr.push_back(ojson{{"k", r.k}, {"q", r.q}, {"p_sum", r.p_sum}, {"p_beta", r.p_beta}});
            j["rows"] = arr;
            body = dump(j);
        } else if (f == Format::Csv) {
            body = "k,q,p_sum,p_beta\n";
            for (const auto& r : rows)
                body += std::to_string(r.k) + "," + shortest(r.q) + "," + shortest(r.p_sum) + "," +
                        shortest(r.p_beta) + "\n";
        } else if (rows.size() == 1) {
            body = fmt("%.7f", rows[0].p_sum) + "\n";
        } else {
            for (const auto& r : rows)
                body += "k=" + std::to_string(r.k) + " q=" + fmt("%g", r.q) + " P=" + fmt("%.7f", r.p_sum) + "\n";
        }
        return {{{"finality." + ext(f), body}}, g.seed};
    };

    CLI::App* diff = leaf(analyze, "difficulty", "Largest safe per-node mining probability", "analyze difficulty");
    diff->add_option("--q", qs, "Attacker hashrate share")->required()->expected(1);
    diff->add_option("--eps", eps, "Security margin epsilon");
    diff->add_option("--delta", delta, "Propagation delay in rounds");
    diff->add_option("--n", n_nodes, "Number of nodes");
    diff->add_option("--threshold", threshold, "Honest threshold");
    diff->add_option("--p", p, "Also check security at this probability");
    handlers[diff] = [&]() -> Output {
        Format f = resolve(g, Format::Text, {Format::Json, Format::Text});
        double q = qs.front();
        double pmax = analysis::max_mining_prob(q, eps, delta, n_nodes, threshold);
        ojson j{{"constants", constants_json()}, {"q", q},          {"epsilon", eps},
                {"delta", delta},                {"n", n_nodes},    {"threshold", threshold},
                {"max_p", pmax}};
        std::string text = "max_p " + fmt("%.10g", pmax) + "\n";
        if (p >= 0) {
            analysis::SecurityParams s;
            s.n = n_nodes, s.p = p, s.q = q, s.epsilon = eps, s.delta = delta, s.honest_threshold = threshold;
            bool ok = analysis::security_holds(s);
            j["p"] = p;
            j["secure"] = ok;
            text += std::string("p ") + fmt("%.10g", p) + (ok ? " secure\n" : " insecure\n");
        }
        return {{{"difficulty." + ext(f), f == Format::Json ? dump(j) : text}}, g.seed};
    };

    CLI::App* unfair = leaf(analyze, "unfairness", "Honest share floor of the chain", "analyze unfairness");
    unfair->add_option("--q", qs, "Attacker hashrate share")->required()->expected(1);
    handlers[unfair] = [&]() -> Output {
        Format f = resolve(g, Format::Text, {Format::Json, Format::Text});
        double b = analysis::unfairness_bound(qs.front());
        ojson j{{"q", qs.front()}, {"bound", b}};
        return {{{"unfairness." + ext(f), f == Format::Json ? dump(j) : fmt("%.4f", b) + "\n"}}, g.seed};
    };

    CLI::App* eff = leaf(analyze, "efficiency", "Useful share of mined blocks", "analyze efficiency");
    eff->add_option("--q", qs, "Attacker hashrate share")->expected(1);
    eff->add_option("--p", p, "Per-node mining probability")->required();
    eff->add_option("--n", n_nodes, "Number of nodes");
    eff->add_option("--eps", eps, "Security margin epsilon");
    eff->add_option("--delta", delta, "Propagation delay in rounds");
    handlers[eff] = [&]() -> Output {
        Format f = resolve(g, Format::Text, {Format::Json, Format::Text});
        analysis::SecurityParams s;
        s.n = n_nodes, s.p = p, s.epsilon = eps, s.delta = delta;
        if (!qs.empty()) s.q = qs.front();
        double e = analysis::efficiency(s);
        double r = analysis::rounds_per_good_block(s);
        ojson j{{"n", s.n}, {"p", s.p}, {"q", s.q}, {"delta", s.delta}, {"efficiency", e}, {"rounds_per_good_block", r}};
        std::string text = "efficiency " + fmt("%.6f", e) + "\nrounds_per_good_block " + fmt("%.6g", r) + "\n";
        return {{{"efficiency." + ext(f), f == Format::Json ? dump(j) : text}}, g.seed};
    };

    // plasma
    CLI::App* plasma_cmd = app.add_subcommand("plasma", "Layer-2 exit game");
    plasma_cmd->require_subcommand(1);
    CLI::App* demo = leaf(plasma_cmd, "demo", "Three-party walkthrough transcript", "plasma demo");
    handlers[demo] = [&]() -> Output {
        resolve(g, Format::Json, {Format::Json});
        return {{{"transcript.json", plasma::run_three_party_example().to_json()}}, g.seed};
    };
    CLI::App* prun = leaf(plasma_cmd, "run", "Run a scripted scenario (--config)", "plasma run");
    handlers[prun] = [&]() -> Output {
        resolve(g, Format::Json, {Format::Json});
        if (g.config_path.empty()) throw UsageError("plasma run needs --config");
        return {{{"transcript.json", plasma::run_script(read_file(g.config_path)).to_json()}}, g.seed};
    };
    CLI::App* pfraud = leaf(plasma_cmd, "fraud", "Operator fraud and mass exit", "plasma fraud");
    handlers[pfraud] = [&]() -> Output {
        resolve(g, Format::Json, {Format::Json});
        auto r = plasma::run_fraud_scenario();
        return {{{"transcript.json", r.transcript.to_json()}}, g.seed};
    };

    // swap
    CLI::App* swap = app.add_subcommand("swap", "Hash time-locked swap");
    swap->require_subcommand(1);
    std::string scenario_name = "honest";
    bool explore = false;
    CLI::App* srun = leaf(swap, "run", "Run one scenario or explore all interleavings", "swap run");
    srun->add_option("--scenario", scenario_name, "honest, bob_aborts, alice_never_claims, alice_claims_late");
    srun->add_flag("--explore", explore, "Exhaustive interleaving search");
    handlers[srun] = [&]() -> Output {
        resolve(g, Format::Json, {Format::Json});
        interop::SwapParams sp;
        if (!g.config_path.empty()) {
            auto j = ojson::parse(read_file(g.config_path));
            if (!j.is_object()) throw DomainError("BadScript", "swap config must be an object");
            for (auto it = j.begin(); it != j.end(); ++it) {
                const auto& k = it.key();
                if (k == "amount_x") sp.amount_x = it->get<ledger::Amount>();
                else if (k == "amount_y") sp.amount_y = it->get<ledger::Amount>();
                else if (k == "alice_expiry") sp.alice_expiry = it->get<std::uint64_t>();
                else if (k == "bob_expiry") sp.bob_expiry = it->get<std::uint64_t>();
                else if (k == "claim_latency") sp.claim_latency = it->get<std::uint64_t>();
                else if (k == "alice_claim_time") sp.alice_claim_time = it->get<std::uint64_t>();
                else throw DomainError("BadScript", "unknown swap field " + k);
            }
        }
        sp.seed = g.seed;
        if (explore) {
            auto r = interop::explore_swap(sp);
            ojson j{{"states", r.states},     {"terminals", r.terminals}, {"swapped", r.swapped},
                    {"refunded", r.refunded}, {"mixed", r.mixed},         {"counterexample", r.counterexample}};
            return {{{"explore.json", dump(j)}}, g.seed};
        }
        auto t = interop::run_atomic_swap(interop::parse_scenario(scenario_name), sp);
        return {{{"swap.json", t.to_json()}}, g.seed};
    };

    // bridge
    CLI::App* bridge = app.add_subcommand("bridge", "Cross-chain bridge");
    bridge->require_subcommand(1);
    CLI::App* brun = leaf(bridge, "run", "Run a bridge script (--config)", "bridge run");
    handlers[brun] = [&]() -> Output {
        resolve(g, Format::Json, {Format::Json});
        if (g.config_path.empty()) throw UsageError("bridge run needs --config");
        return {{{"bridge.json", interop::run_bridge_script(read_file(g.config_path)).to_json()}}, g.seed};
    };

    // Parse. CLI11 wants argv order reversed.
    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << "\n";
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    }
    g.seed_given = app.count("--seed") > 0;
    if (!format_name.empty())
        g.format = format_name == "json" ? Format::Json : format_name == "csv" ? Format::Csv : Format::Text;

    CLI::App* chosen = nullptr;
    for (auto& [sub, _] : handlers)
        if (sub->parsed()) chosen = sub;
    if (!chosen) {
        err << "usage error: missing subcommand\n";
        return kUsage;
    }

    try {
        Output o = handlers[chosen]();
        const auto& primary = o.artifacts.front();
        out << primary.content;
        if (!g.out_dir.empty()) {
            fs::create_directories(g.out_dir);
            RunManifest m;
            m.command = names[chosen];
            m.seed = o.seed;
            m.tool_version = std::string(kToolVersion);
            // config bytes, then every option actually given, as name=values in
            // sorted order so argument placement does not matter
            std::string material = g.config_path.empty() ? "" : read_file(g.config_path);
            std::vector<std::string> given{m.command};
            collect_options(app, given);
            std::sort(given.begin(), given.end());
            for (const auto& s : given) {
                material.push_back('\0');
                material += s;
            }
            m.config_digest = crypto::sha256(as_bytes(material)).hex();
            for (const auto& a : o.artifacts) {
                std::ofstream f(fs::path(g.out_dir) / a.name, std::ios::binary);
                f << a.content;
                if (!f) throw DomainError("IoError", "cannot write " + a.name);
                m.outputs.push_back(a.name);
            }
            std::ofstream mf(fs::path(g.out_dir) / "manifest.json", std::ios::binary);
            mf << m.to_json();
        } else if (o.artifacts.size() > 1 && names[chosen] == "sim run") {
            for (std::size_t i = 1; i < o.artifacts.size(); ++i) err << o.artifacts[i].content;
        }
        return kOk;
    } catch (const UsageError& e) {
        err << "usage error: " << e.what() << "\n";
        return kUsage;
    } catch (const DomainError& e) {
        err << "error: " << e.what() << "\n";
        return kDomain;
    } catch (const nlohmann::json::exception& e) {
        err << "error: BadConfig: " << e.what() << "\n";
        return kDomain;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return kInternal;
    }
}

} // namespace bcw::cli
