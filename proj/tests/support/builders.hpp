#pragma once

// Shared fixture builders for the unit and acceptance suites.

#include <set>
#include <utility>
#include <vector>

#include "travnav/factor_graph.hpp"
#include "travnav/rng.hpp"
#include "travnav/topology.hpp"

namespace travnav::testing {

inline TopologicalMap line_map(int n, double spacing = 1.0) {
    std::vector<Point2> nodes;
    std::vector<Edge> edges;
    for (int i = 0; i < n; ++i) nodes.push_back({spacing * i, 0.0});
    for (int i = 0; i + 1 < n; ++i) edges.push_back({i, i, i + 1, spacing});
    return TopologicalMap(std::move(nodes), std::move(edges));
}

// three nodes on a line; direct edge 0-2 carries an explicit longer length
inline TopologicalMap triangle_map(double ab, double bc, double ac) {
    std::vector<Point2> nodes{{0.0, 0.0}, {1.0, 0.0}, {2.0, 0.0}};
    std::vector<Edge> edges{{0, 0, 1, ab}, {1, 1, 2, bc}, {2, 0, 2, ac}};
    return TopologicalMap(std::move(nodes), std::move(edges));
}

// connected random geometric map: spanning tree plus extra chords
inline TopologicalMap random_map(Rng& rng, int n, int extra_edges) {
    std::vector<Point2> nodes;
    for (int i = 0; i < n; ++i)
        nodes.push_back({rng.uniform() * 20.0, rng.uniform() * 20.0});
    std::vector<Edge> edges;
    std::set<std::pair<int, int>> used;
    for (int v = 1; v < n; ++v) {
        const int u = static_cast<int>(rng.below(static_cast<uint64_t>(v)));
        used.insert({std::min(u, v), std::max(u, v)});
    }
    int added = 0;
    int guard = 0;
    while (added < extra_edges && ++guard < 1000) {
        const int u = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        const int v = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        if (u == v) continue;
        if (used.insert({std::min(u, v), std::max(u, v)}).second) ++added;
    }
    int id = 0;
    for (const auto& [u, v] : used) {
        Edge e;
        e.id = id++;
        e.u = u;
        e.v = v;
        e.length = euclidean(nodes[static_cast<size_t>(u)], nodes[static_cast<size_t>(v)]);
        if (e.length < 1e-6) e.length = 1e-6 + e.length;
        edges.push_back(e);
    }
    return TopologicalMap(std::move(nodes), std::move(edges));
}

inline FactorGraph random_tree_graph(Rng& rng, int n, double psi_lo = 0.25, double psi_hi = 4.0) {
    FactorGraph graph(n);
    for (int v = 0; v < n; ++v) {
        const double p = 0.1 + 0.8 * rng.uniform();
        graph.set_unary(v, 1.0 - p, p);
    }
    for (int v = 1; v < n; ++v) {
        const int parent = static_cast<int>(rng.below(static_cast<uint64_t>(v)));
        std::array<double, 4> table{};
        for (auto& t : table) t = psi_lo + (psi_hi - psi_lo) * rng.uniform();
        graph.add_pair(parent, v, table);
    }
    return graph;
}

inline FactorGraph random_loopy_graph(Rng& rng, int n, int extra, double psi_lo, double psi_hi) {
    FactorGraph graph(n);
    for (int v = 0; v < n; ++v) {
        const double p = 0.1 + 0.8 * rng.uniform();
        graph.set_unary(v, 1.0 - p, p);
    }
    std::set<std::pair<int, int>> used;
    for (int v = 1; v < n; ++v)
        used.insert({static_cast<int>(rng.below(static_cast<uint64_t>(v))), v});
    int added = 0;
    int guard = 0;
    while (added < extra && ++guard < 1000) {
        const int u = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        const int v = static_cast<int>(rng.below(static_cast<uint64_t>(n)));
        if (u == v) continue;
        if (used.insert({std::min(u, v), std::max(u, v)}).second) ++added;
    }
    for (const auto& [u, v] : used) {
        std::array<double, 4> table{};
        for (auto& t : table) t = psi_lo + (psi_hi - psi_lo) * rng.uniform();
        graph.add_pair(u, v, table);
    }
    return graph;
}

}  // namespace travnav::testing
