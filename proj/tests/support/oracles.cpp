#include "support/oracles.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace travnav::oracle {

double assignment_weight(const FactorGraph& graph, const std::vector<int>& assignment) {
    double w = 1.0;
    for (int v = 0; v < graph.var_count(); ++v) {
        const int c = graph.clamped_value(v);
        const int s = assignment[static_cast<size_t>(v)];
        if (c != -1) {
            if (s != c) return 0.0;
            continue;  // clamped variables contribute no unary factor
        }
        w *= graph.unary(v)[static_cast<size_t>(s)];
    }
    for (const auto& f : graph.pairs())
        w *= f.table[static_cast<size_t>(assignment[static_cast<size_t>(f.a)] * 2 +
                                         assignment[static_cast<size_t>(f.b)])];
    return w;
}

std::vector<std::array<double, 2>> enumerate_marginals(const FactorGraph& graph) {
    const int n = graph.var_count();
    if (n > 24) throw std::invalid_argument("enumerate_marginals: too many variables");
    std::vector<std::array<double, 2>> marginals(static_cast<size_t>(n), {0.0, 0.0});
    std::vector<int> assignment(static_cast<size_t>(n));
    const size_t total = static_cast<size_t>(1) << n;
    double mass = 0.0;
    for (size_t bits = 0; bits < total; ++bits) {
        for (int v = 0; v < n; ++v) assignment[static_cast<size_t>(v)] = static_cast<int>((bits >> v) & 1);
        const double w = assignment_weight(graph, assignment);
        mass += w;
        for (int v = 0; v < n; ++v)
            marginals[static_cast<size_t>(v)][static_cast<size_t>(assignment[static_cast<size_t>(v)])] += w;
    }
    for (auto& m : marginals) {
        m[0] /= mass;
        m[1] /= mass;
    }
    return marginals;
}

std::vector<int> enumerate_map(const FactorGraph& graph) {
    const int n = graph.var_count();
    if (n > 24) throw std::invalid_argument("enumerate_map: too many variables");
    std::vector<int> assignment(static_cast<size_t>(n));
    std::vector<int> best;
    double best_w = -1.0;
    const size_t total = static_cast<size_t>(1) << n;
    for (size_t bits = 0; bits < total; ++bits) {
        for (int v = 0; v < n; ++v) assignment[static_cast<size_t>(v)] = static_cast<int>((bits >> v) & 1);
        const double w = assignment_weight(graph, assignment);
        if (w > best_w) {
            best_w = w;
            best = assignment;
        }
    }
    return best;
}

std::optional<double> dijkstra_length(const TopologicalMap& map, NodeId from, NodeId to,
                                      const std::vector<uint8_t>& traversable) {
    const int n = map.node_count();
    std::vector<double> dist(static_cast<size_t>(n), std::numeric_limits<double>::infinity());
    using Item = std::pair<double, NodeId>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    dist[static_cast<size_t>(from)] = 0.0;
    queue.push({0.0, from});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (d > dist[static_cast<size_t>(v)]) continue;
        for (EdgeId e : map.adjacent_edges(v)) {
            if (!traversable[static_cast<size_t>(e)]) continue;
            const NodeId w = map.other_end(e, v);
            const double nd = d + map.edge(e).length;
            if (nd < dist[static_cast<size_t>(w)]) {
                dist[static_cast<size_t>(w)] = nd;
                queue.push({nd, w});
            }
        }
    }
    if (dist[static_cast<size_t>(to)] == std::numeric_limits<double>::infinity()) return std::nullopt;
    return dist[static_cast<size_t>(to)];
}

namespace {

void dfs_paths(const TopologicalMap& map, NodeId at, NodeId to, const std::vector<uint8_t>& traversable,
               std::vector<char>& visited, double len, double& best) {
    if (at == to) {
        if (len < best) best = len;
        return;
    }
    visited[static_cast<size_t>(at)] = 1;
    for (EdgeId e : map.adjacent_edges(at)) {
        if (!traversable[static_cast<size_t>(e)]) continue;
        const NodeId w = map.other_end(e, at);
        if (visited[static_cast<size_t>(w)]) continue;
        dfs_paths(map, w, to, traversable, visited, len + map.edge(e).length, best);
    }
    visited[static_cast<size_t>(at)] = 0;
}

}  // namespace

std::optional<double> brute_force_shortest(const TopologicalMap& map, NodeId from, NodeId to,
                                           const std::vector<uint8_t>& traversable) {
    std::vector<char> visited(static_cast<size_t>(map.node_count()), 0);
    double best = std::numeric_limits<double>::infinity();
    dfs_paths(map, from, to, traversable, visited, 0.0, best);
    if (best == std::numeric_limits<double>::infinity()) return std::nullopt;
    return best;
}

double mixture_pair_mi(const TemplateSet& ts, EdgeId i, EdgeId j) {
    const double eps = ts.noise;
    const double m = static_cast<double>(ts.templates.size());
    double joint[2][2] = {{0, 0}, {0, 0}};
    for (const auto& tmpl : ts.templates) {
        const double pi1 = tmpl[static_cast<size_t>(i)] ? 1.0 - eps : eps;
        const double pj1 = tmpl[static_cast<size_t>(j)] ? 1.0 - eps : eps;
        for (int si = 0; si < 2; ++si)
            for (int sj = 0; sj < 2; ++sj)
                joint[si][sj] += (si ? pi1 : 1.0 - pi1) * (sj ? pj1 : 1.0 - pj1) / m;
    }
    const double pi[2] = {joint[0][0] + joint[0][1], joint[1][0] + joint[1][1]};
    const double pj[2] = {joint[0][0] + joint[1][0], joint[0][1] + joint[1][1]};
    double mi = 0.0;
    for (int si = 0; si < 2; ++si)
        for (int sj = 0; sj < 2; ++sj)
            if (joint[si][sj] > 0.0) mi += joint[si][sj] * std::log2(joint[si][sj] / (pi[si] * pj[sj]));
    return mi;
}

std::vector<double> table_conditional(const std::vector<double>& table, int edges,
                                      const std::vector<int>& obs_state) {
    std::vector<double> ones(static_cast<size_t>(edges), 0.0);
    double mass = 0.0;
    for (size_t bits = 0; bits < table.size(); ++bits) {
        bool consistent = true;
        for (int e = 0; e < edges && consistent; ++e) {
            if (obs_state[static_cast<size_t>(e)] == -1) continue;
            if (static_cast<int>((bits >> e) & 1) != obs_state[static_cast<size_t>(e)]) consistent = false;
        }
        if (!consistent) continue;
        mass += table[bits];
        for (int e = 0; e < edges; ++e)
            if ((bits >> e) & 1) ones[static_cast<size_t>(e)] += table[bits];
    }
    for (auto& v : ones) v /= mass;
    return ones;
}

}  // namespace travnav::oracle
