#pragma once

// Brute-force oracles for the test suites. Everything here recomputes
// results by direct enumeration, independent of the library's inference and
// search paths.

#include <array>
#include <optional>
#include <vector>

#include "travnav/env.hpp"
#include "travnav/factor_graph.hpp"
#include "travnav/topology.hpp"

namespace travnav::oracle {

// exact marginals of the distribution a factor graph defines (clamps
// respected), by summing all 2^n assignments
std::vector<std::array<double, 2>> enumerate_marginals(const FactorGraph& graph);

// exact MAP assignment by enumeration; requires a unique maximizer
std::vector<int> enumerate_map(const FactorGraph& graph);

// unnormalized weight of one assignment under the graph
double assignment_weight(const FactorGraph& graph, const std::vector<int>& assignment);

// plain Dijkstra, lengths only, written without the library's search
std::optional<double> dijkstra_length(const TopologicalMap& map, NodeId from, NodeId to,
                                      const std::vector<uint8_t>& traversable);

// exhaustive DFS over all simple paths; only sane for small graphs
std::optional<double> brute_force_shortest(const TopologicalMap& map, NodeId from, NodeId to,
                                           const std::vector<uint8_t>& traversable);

// closed-form pairwise MI in bits of the template mixture with flip noise
double mixture_pair_mi(const TemplateSet& ts, EdgeId i, EdgeId j);

// conditional marginals p(edge = 1 | obs) of an explicit joint table over
// 2^n configurations (bit e of the index = state of edge e)
std::vector<double> table_conditional(const std::vector<double>& table, int edges,
                                      const std::vector<int>& obs_state /* -1 unknown */);

}  // namespace travnav::oracle
