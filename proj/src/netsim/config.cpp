#include "bcw/netsim/config.hpp"

#include <cmath>
#include <set>

#include <json.hpp>

namespace bcw::netsim {

using nlohmann::json;

std::string_view to_string(Strategy s) {
    switch (s) {
    case Strategy::Honest: return "honest";
    case Strategy::Selfish: return "selfish";
    case Strategy::Silent: return "silent";
    }
    return "honest";
}

Strategy parse_strategy(std::string_view s) {
    if (s == "honest") return Strategy::Honest;
    if (s == "selfish") return Strategy::Selfish;
    if (s == "silent") return Strategy::Silent;
    throw SimError(SimErrc::InvalidConfig, "unknown strategy '" + std::string(s) + "'");
}

namespace {

std::string_view kind_name(TopologyKind k) {
    switch (k) {
    case TopologyKind::RandomRegular: return "random_regular";
    case TopologyKind::Ring: return "ring";
    case TopologyKind::Complete: return "complete";
    case TopologyKind::Explicit: return "explicit";
    }
    return "random_regular";
}

TopologyKind parse_kind(const std::string& s) {
    if (s == "random_regular") return TopologyKind::RandomRegular;
    if (s == "ring") return TopologyKind::Ring;
    if (s == "complete") return TopologyKind::Complete;
    if (s == "explicit") return TopologyKind::Explicit;
    throw SimError(SimErrc::InvalidConfig, "unknown topology kind '" + s + "'");
}

[[noreturn]] void bad(const std::string& msg) { throw SimError(SimErrc::InvalidConfig, msg); }

void only_keys(const json& obj, std::initializer_list<std::string_view> allowed, const std::string& where) {
    if (!obj.is_object()) bad(where + " must be an object");
    for (const auto& [k, _] : obj.items()) {
        bool ok = false;
        for (auto a : allowed) ok = ok || k == a;
        if (!ok) bad("unknown key '" + k + "' in " + where);
    }
}

long long get_int(const json& v, const std::string& key) {
    if (!v.is_number_integer()) bad("'" + key + "' must be an integer");
    return v.get<long long>();
}

double get_num(const json& v, const std::string& key) {
    if (!v.is_number()) bad("'" + key + "' must be a number");
    return v.get<double>();
}

std::string get_str(const json& v, const std::string& key) {
    if (!v.is_string()) bad("'" + key + "' must be a string");
    return v.get<std::string>();
}

TopologySpec parse_topology(const json& v) {
    TopologySpec t;
    if (v.is_string()) {
        t.kind = parse_kind(v.get<std::string>());
        return t;
    }
    only_keys(v, {"kind", "degree", "neighbors"}, "topology");
    if (v.contains("kind")) t.kind = parse_kind(get_str(v["kind"], "kind"));
    if (v.contains("degree")) t.degree = static_cast<int>(get_int(v["degree"], "degree"));
    if (v.contains("neighbors")) {
        if (!v["neighbors"].is_array()) bad("'neighbors' must be an array of arrays");
        for (const auto& row : v["neighbors"]) {
            if (!row.is_array()) bad("'neighbors' must be an array of arrays");
            std::vector<int> r;
            for (const auto& x : row) r.push_back(static_cast<int>(get_int(x, "neighbors")));
            t.neighbors.push_back(std::move(r));
        }
        if (!v.contains("kind")) t.kind = TopologyKind::Explicit;
    }
    return t;
}

} // namespace

void SimConfig::validate() const {
    if (n < 1 || n > 100000) bad("n must be in [1, 100000]");
    if (!(p >= 0.0 && p <= 1.0)) bad("p must be in [0, 1]");
    if (delta < 0) bad("delta must be >= 0");
    if (!(honest_fraction > 0.0 && honest_fraction <= 1.0)) bad("honest_fraction must be in (0, 1]");
    if (rounds < 0) bad("rounds must be >= 0");
    if (!(tx_rate >= 0.0 && tx_rate <= 1.0)) bad("tx_rate must be in [0, 1]");
    if (!strategies.empty() && static_cast<int>(strategies.size()) != n)
        bad("strategies must list exactly n entries");
    if (topology.degree < 0) bad("degree must be >= 0");
}

std::vector<Strategy> SimConfig::resolved_strategies() const {
    if (!strategies.empty()) return strategies;
    // Honest nodes come first; round up so 0.51 of 20 gives 11 honest nodes.
    const int honest = std::clamp(static_cast<int>(std::ceil(honest_fraction * n - 1e-9)), 1, n);
    std::vector<Strategy> out(static_cast<std::size_t>(n), adversary);
    for (int i = 0; i < honest; ++i) out[static_cast<std::size_t>(i)] = Strategy::Honest;
    return out;
}

SimConfig config_from_json(std::string_view text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        bad(std::string("malformed JSON: ") + e.what());
    }
    only_keys(j,
              {"n", "topology", "p", "delta", "honest_fraction", "adversary", "strategies", "rounds", "seed",
               "tx_rate", "max_block_txs", "trace"},
              "config");
    SimConfig c;
    if (j.contains("n")) c.n = static_cast<int>(get_int(j["n"], "n"));
    if (j.contains("topology")) c.topology = parse_topology(j["topology"]);
    if (j.contains("p")) c.p = get_num(j["p"], "p");
    if (j.contains("delta")) c.delta = static_cast<int>(get_int(j["delta"], "delta"));
    if (j.contains("honest_fraction")) c.honest_fraction = get_num(j["honest_fraction"], "honest_fraction");
    if (j.contains("adversary")) c.adversary = parse_strategy(get_str(j["adversary"], "adversary"));
    if (j.contains("strategies")) {
        if (!j["strategies"].is_array()) bad("'strategies' must be an array");
        for (const auto& s : j["strategies"]) c.strategies.push_back(parse_strategy(get_str(s, "strategies")));
    }
    if (j.contains("rounds")) c.rounds = static_cast<int>(get_int(j["rounds"], "rounds"));
    if (j.contains("seed")) {
        if (!j["seed"].is_number_unsigned()) bad("'seed' must be a non-negative integer");
        c.seed = j["seed"].get<std::uint64_t>();
    }
    if (j.contains("tx_rate")) c.tx_rate = get_num(j["tx_rate"], "tx_rate");
    if (j.contains("max_block_txs")) {
        const auto m = get_int(j["max_block_txs"], "max_block_txs");
        if (m < 0) bad("'max_block_txs' must be >= 0");
        c.max_block_txs = static_cast<std::size_t>(m);
    }
    if (j.contains("trace")) {
        if (!j["trace"].is_boolean()) bad("'trace' must be a boolean");
        c.trace = j["trace"].get<bool>();
    }
    c.validate();
    return c;
}

std::string config_to_json(const SimConfig& c) {
    json t = {{"kind", kind_name(c.topology.kind)}, {"degree", c.topology.degree}};
    if (c.topology.kind == TopologyKind::Explicit) t["neighbors"] = c.topology.neighbors;
    json j = {{"n", c.n},
              {"topology", t},
              {"p", c.p},
              {"delta", c.delta},
              {"honest_fraction", c.honest_fraction},
              {"adversary", to_string(c.adversary)},
              {"rounds", c.rounds},
              {"seed", c.seed},
              {"tx_rate", c.tx_rate},
              {"max_block_txs", c.max_block_txs},
              {"trace", c.trace}};
    if (!c.strategies.empty()) {
        json s = json::array();
        for (auto x : c.strategies) s.push_back(to_string(x));
        j["strategies"] = s;
    }
    return j.dump(2);
}

} // namespace bcw::netsim
