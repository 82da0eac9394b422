#include "bcw/netsim/topology.hpp"

#include <algorithm>
#include <random>
#include <set>

namespace bcw::netsim {

namespace {

[[noreturn]] void bad(const std::string& msg) { throw SimError(SimErrc::InvalidTopology, msg); }

// Pairing model: lay out n*k stubs, shuffle, pair neighbours; restart on
// loops or multi-edges. Fine for the small degrees used here.
Adjacency random_regular(int n, int k, std::mt19937_64& rng) {
    if (k >= n) bad("degree must be below node count");
    if ((static_cast<long long>(n) * k) % 2 != 0) bad("n * degree must be even");
    if (k == 0) return Adjacency(static_cast<std::size_t>(n));
    for (int attempt = 0; attempt < 10000; ++attempt) {
        std::vector<int> stubs;
        stubs.reserve(static_cast<std::size_t>(n) * k);
        for (int v = 0; v < n; ++v)
            for (int i = 0; i < k; ++i) stubs.push_back(v);
        std::shuffle(stubs.begin(), stubs.end(), rng);
        std::set<std::pair<int, int>> edges;
        bool ok = true;
        for (std::size_t i = 0; ok && i < stubs.size(); i += 2) {
            int a = stubs[i], b = stubs[i + 1];
            if (a == b) ok = false;
            if (a > b) std::swap(a, b);
            ok = ok && edges.insert({a, b}).second;
        }
        if (!ok) continue;
        Adjacency adj(static_cast<std::size_t>(n));
        for (auto [a, b] : edges) {
            adj[static_cast<std::size_t>(a)].push_back(b);
            adj[static_cast<std::size_t>(b)].push_back(a);
        }
        for (auto& row : adj) std::sort(row.begin(), row.end());
        if (is_connected(adj)) return adj;
    }
    bad("could not sample a connected simple regular graph");
}

} // namespace

bool is_valid_topology(const Adjacency& adj) {
    const int n = static_cast<int>(adj.size());
    for (int v = 0; v < n; ++v) {
        std::set<int> seen;
        for (int u : adj[static_cast<std::size_t>(v)]) {
            if (u < 0 || u >= n || u == v || !seen.insert(u).second) return false;
            const auto& back = adj[static_cast<std::size_t>(u)];
            if (std::find(back.begin(), back.end(), v) == back.end()) return false;
        }
    }
    return true;
}

bool is_connected(const Adjacency& adj) {
    if (adj.empty()) return true;
    std::vector<bool> seen(adj.size(), false);
    std::vector<int> stack{0};
    seen[0] = true;
    std::size_t count = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int u : adj[static_cast<std::size_t>(v)])
            if (!seen[static_cast<std::size_t>(u)]) {
                seen[static_cast<std::size_t>(u)] = true;
                ++count;
                stack.push_back(u);
            }
    }
    return count == adj.size();
}

Adjacency build_topology(const TopologySpec& topo, int n, std::uint64_t seed) {
    if (n < 1) bad("need at least one node");
    Adjacency adj(static_cast<std::size_t>(n));
    switch (topo.kind) {
    case TopologyKind::Complete:
        for (int v = 0; v < n; ++v)
            for (int u = 0; u < n; ++u)
                if (u != v) adj[static_cast<std::size_t>(v)].push_back(u);
        break;
    case TopologyKind::Ring:
        for (int v = 0; n > 1 && v < n; ++v) {
            std::set<int> s{(v + 1) % n, (v + n - 1) % n};
            adj[static_cast<std::size_t>(v)].assign(s.begin(), s.end());
        }
        break;
    case TopologyKind::Explicit:
        if (static_cast<int>(topo.neighbors.size()) != n) bad("explicit neighbor lists must cover all n nodes");
        adj = topo.neighbors;
        if (!is_valid_topology(adj)) bad("explicit neighbor lists are not a simple undirected graph");
        break;
    case TopologyKind::RandomRegular: {
        if (n == 1) break;
        // Small networks cannot host the default degree; fall back to complete.
        const int k = std::min(topo.degree, n - 1);
        if (k == n - 1) return build_topology({TopologyKind::Complete, 0, {}}, n, seed);
        std::mt19937_64 rng(seed ^ 0x746f706f6c6f6779ULL);
        adj = random_regular(n, k, rng);
        break;
    }
    }
    if (n > 1 && !is_connected(adj)) bad("topology is not connected");
    return adj;
}

} // namespace bcw::netsim
