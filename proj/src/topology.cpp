#include "travnav/topology.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace travnav {

namespace {

// Slack for length-vs-Euclidean validation and for shortest-path ties.
constexpr double kLengthSlack = 1e-9;

[[noreturn]] void fail(const std::string& msg) { throw std::invalid_argument("map: " + msg); }

}  // namespace

double euclidean(const Point2& a, const Point2& b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

TopologicalMap::TopologicalMap(std::vector<Point2> positions, std::vector<Edge> edges)
    : positions_(std::move(positions)), edges_(std::move(edges)) {
    const int n = node_count();
    const int m = edge_count();
    if (n == 0) fail("no nodes");

    adjacency_.assign(n, {});
    std::set<std::pair<NodeId, NodeId>> seen;
    for (int i = 0; i < m; ++i) {
        const Edge& e = edges_[static_cast<size_t>(i)];
        if (e.id != i) fail("edge ids must be dense 0..m-1, got id " + std::to_string(e.id) + " at slot " + std::to_string(i));
        if (e.u < 0 || e.u >= n || e.v < 0 || e.v >= n)
            fail("edge " + std::to_string(e.id) + ": endpoint out of range");
        if (e.u == e.v) fail("edge " + std::to_string(e.id) + ": self-loop at node " + std::to_string(e.u));
        auto key = std::minmax(e.u, e.v);
        if (!seen.insert(key).second)
            fail("edge " + std::to_string(e.id) + ": duplicate endpoint pair (" + std::to_string(e.u) + "," + std::to_string(e.v) + ")");
        if (!(e.length > 0.0)) fail("edge " + std::to_string(e.id) + ": non-positive length");
        const double lb = euclidean(positions_[static_cast<size_t>(e.u)], positions_[static_cast<size_t>(e.v)]);
        if (e.length < lb - kLengthSlack)
            fail("edge " + std::to_string(e.id) + ": length " + std::to_string(e.length) +
                 " shorter than endpoint distance " + std::to_string(lb));
        adjacency_[static_cast<size_t>(e.u)].push_back(e.id);
        adjacency_[static_cast<size_t>(e.v)].push_back(e.id);
        total_length_ += e.length;
    }
    for (auto& adj : adjacency_) std::sort(adj.begin(), adj.end());

    // connectivity with every edge traversable
    std::vector<char> visited(static_cast<size_t>(n), 0);
    std::queue<NodeId> frontier;
    frontier.push(0);
    visited[0] = 1;
    int reached = 1;
    while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop();
        for (EdgeId e : adjacency_[static_cast<size_t>(v)]) {
            NodeId w = other_end(e, v);
            if (!visited[static_cast<size_t>(w)]) {
                visited[static_cast<size_t>(w)] = 1;
                ++reached;
                frontier.push(w);
            }
        }
    }
    if (reached != n) {
        for (int v = 0; v < n; ++v)
            if (!visited[static_cast<size_t>(v)]) fail("disconnected graph, node " + std::to_string(v) + " unreachable");
    }
}

TopologicalMap TopologicalMap::load_json(const std::string& text) {
    nlohmann::json doc;
    try {
        doc = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        fail(std::string("malformed document: ") + e.what());
    }
    if (!doc.is_object() || !doc.contains("nodes") || !doc.contains("edges"))
        fail("malformed document: expected top-level keys 'nodes' and 'edges'");

    const auto& jn = doc["nodes"];
    const auto& je = doc["edges"];
    if (!jn.is_array() || !je.is_array()) fail("malformed document: 'nodes' and 'edges' must be arrays");

    std::vector<Point2> positions(jn.size());
    std::vector<char> node_seen(jn.size(), 0);
    for (const auto& item : jn) {
        if (!item.contains("id") || !item.contains("x") || !item.contains("y"))
            fail("malformed node entry: needs id, x, y");
        const int id = item["id"].get<int>();
        if (id < 0 || id >= static_cast<int>(jn.size()) || node_seen[static_cast<size_t>(id)])
            fail("node ids must be dense 0..n-1, got " + std::to_string(id));
        node_seen[static_cast<size_t>(id)] = 1;
        positions[static_cast<size_t>(id)] = {item["x"].get<double>(), item["y"].get<double>()};
    }

    std::vector<Edge> edges(je.size());
    std::vector<char> edge_seen(je.size(), 0);
    for (const auto& item : je) {
        if (!item.contains("id") || !item.contains("u") || !item.contains("v"))
            fail("malformed edge entry: needs id, u, v");
        Edge e;
        e.id = item["id"].get<int>();
        if (e.id < 0 || e.id >= static_cast<int>(je.size()) || edge_seen[static_cast<size_t>(e.id)])
            fail("edge ids must be dense 0..m-1, got " + std::to_string(e.id));
        edge_seen[static_cast<size_t>(e.id)] = 1;
        e.u = item["u"].get<int>();
        e.v = item["v"].get<int>();
        if (e.u < 0 || e.u >= static_cast<int>(jn.size()) || e.v < 0 || e.v >= static_cast<int>(jn.size()))
            fail("edge " + std::to_string(e.id) + ": endpoint out of range");
        e.length = item.contains("length") ? item["length"].get<double>()
                                           : euclidean(positions[static_cast<size_t>(e.u)], positions[static_cast<size_t>(e.v)]);
        edges[static_cast<size_t>(e.id)] = e;
    }
    return TopologicalMap(std::move(positions), std::move(edges));
}

TopologicalMap TopologicalMap::load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail("cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return load_json(buf.str());
}

const Point2& TopologicalMap::position(NodeId v) const {
    if (v < 0 || v >= node_count()) fail("invalid node id " + std::to_string(v));
    return positions_[static_cast<size_t>(v)];
}

const Edge& TopologicalMap::edge(EdgeId e) const {
    if (e < 0 || e >= edge_count()) fail("invalid edge id " + std::to_string(e));
    return edges_[static_cast<size_t>(e)];
}

const std::vector<EdgeId>& TopologicalMap::adjacent_edges(NodeId v) const {
    if (v < 0 || v >= node_count()) fail("invalid node id " + std::to_string(v));
    return adjacency_[static_cast<size_t>(v)];
}

NodeId TopologicalMap::other_end(EdgeId e, NodeId v) const {
    const Edge& ed = edge(e);
    if (ed.u == v) return ed.v;
    if (ed.v == v) return ed.u;
    fail("node " + std::to_string(v) + " is not an endpoint of edge " + std::to_string(e));
}

EdgeId TopologicalMap::edge_between(NodeId u, NodeId v) const {
    for (EdgeId e : adjacent_edges(u))
        if (other_end(e, u) == v) return e;
    return -1;
}

double TopologicalMap::mean_edge_length() const {
    return edge_count() ? total_length_ / edge_count() : 0.0;
}

// Exact search in two phases: Dijkstra from the goal gives the distance-to-go
// of every reachable node, then a greedy forward walk follows edges that lie
// on some shortest path, taking the smallest node id at every step. That
// yields the lexicographically smallest node sequence among all shortest
// paths, and the walk terminates because distance-to-go strictly decreases.
std::optional<Path> shortest_path(const TopologicalMap& map, NodeId from, NodeId to,
                                  const EdgePredicate& traversable) {
    const int n = map.node_count();
    if (from < 0 || from >= n) throw std::invalid_argument("shortest_path: invalid from node " + std::to_string(from));
    if (to < 0 || to >= n) throw std::invalid_argument("shortest_path: invalid to node " + std::to_string(to));

    Path path;
    path.nodes.push_back(from);
    if (from == to) return path;

    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> dist_to_goal(static_cast<size_t>(n), kInf);
    std::vector<char> settled(static_cast<size_t>(n), 0);
    using QItem = std::pair<double, NodeId>;
    std::priority_queue<QItem, std::vector<QItem>, std::greater<>> queue;
    dist_to_goal[static_cast<size_t>(to)] = 0.0;
    queue.push({0.0, to});
    while (!queue.empty()) {
        auto [d, v] = queue.top();
        queue.pop();
        if (settled[static_cast<size_t>(v)]) continue;
        settled[static_cast<size_t>(v)] = 1;
        for (EdgeId e : map.adjacent_edges(v)) {
            if (!traversable(e)) continue;
            NodeId w = map.other_end(e, v);
            double nd = d + map.edge(e).length;
            if (nd < dist_to_goal[static_cast<size_t>(w)]) {
                dist_to_goal[static_cast<size_t>(w)] = nd;
                queue.push({nd, w});
            }
        }
    }
    if (dist_to_goal[static_cast<size_t>(from)] == kInf) return std::nullopt;

    NodeId at = from;
    while (at != to) {
        NodeId best_node = -1;
        EdgeId best_edge = -1;
        const double remaining = dist_to_goal[static_cast<size_t>(at)];
        for (EdgeId e : map.adjacent_edges(at)) {
            if (!traversable(e)) continue;
            NodeId w = map.other_end(e, at);
            const double through = map.edge(e).length + dist_to_goal[static_cast<size_t>(w)];
            if (through <= remaining + kLengthSlack && (best_node == -1 || w < best_node)) {
                best_node = w;
                best_edge = e;
            }
        }
        // at is reachable from the goal, so a shortest continuation exists
        path.nodes.push_back(best_node);
        path.edges.push_back(best_edge);
        path.length += map.edge(best_edge).length;
        at = best_node;
    }
    return path;
}

std::optional<Path> shortest_path(const TopologicalMap& map, NodeId from, NodeId to) {
    return shortest_path(map, from, to, [](EdgeId) { return true; });
}

}  // namespace travnav
