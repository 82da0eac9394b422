#pragma once

#include <cstdint>
#include <vector>

#include "bcw/netsim/config.hpp"

namespace bcw::netsim {

using Adjacency = std::vector<std::vector<int>>;

/// Builds neighbor lists for `n` nodes. Random k-regular graphs come from the
/// pairing model with restarts until simple and connected. Throws
/// SimError(InvalidTopology) for impossible requests (n·k odd, k ≥ n, ...).
Adjacency build_topology(const TopologySpec& topo, int n, std::uint64_t seed);

/// Symmetric, loop-free, duplicate-free and in range.
bool is_valid_topology(const Adjacency& adj);
bool is_connected(const Adjacency& adj);

} // namespace bcw::netsim
