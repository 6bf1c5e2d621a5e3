#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace travnav {

using NodeId = int;
using EdgeId = int;

struct Point2 {
    double x = 0.0;
    double y = 0.0;
};

double euclidean(const Point2& a, const Point2& b);

struct Edge {
    EdgeId id = 0;
    NodeId u = 0;
    NodeId v = 0;
    double length = 0.0;
};

struct Path {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
    double length = 0.0;
};

// Undirected simple graph with 2-D node positions and metric edge lengths.
// Immutable after construction; all member queries are pure.
class TopologicalMap {
  public:
    // Validates: dense ids, no self-loops, no duplicate endpoint pairs,
    // positive lengths no shorter than the endpoint distance, connectivity.
    TopologicalMap(std::vector<Point2> positions, std::vector<Edge> edges);

    // Document format: {"nodes":[{"id","x","y"}], "edges":[{"id","u","v","length"?}]}.
    // A missing length is filled with the Euclidean endpoint distance.
    static TopologicalMap load_json(const std::string& text);
    static TopologicalMap load_file(const std::string& path);

    int node_count() const { return static_cast<int>(positions_.size()); }
    int edge_count() const { return static_cast<int>(edges_.size()); }

    const Point2& position(NodeId v) const;
    const Edge& edge(EdgeId e) const;
    const std::vector<Edge>& edges() const { return edges_; }

    const std::vector<EdgeId>& adjacent_edges(NodeId v) const;
    NodeId other_end(EdgeId e, NodeId v) const;
    EdgeId edge_between(NodeId u, NodeId v) const;  // -1 when absent

    double total_edge_length() const { return total_length_; }
    double mean_edge_length() const;

  private:
    std::vector<Point2> positions_;
    std::vector<Edge> edges_;
    std::vector<std::vector<EdgeId>> adjacency_;
    double total_length_ = 0.0;
};

using EdgePredicate = std::function<bool(EdgeId)>;

// Minimal-total-length path over edges where traversable() holds; ties are
// broken toward the lexicographically smallest node sequence. Returns
// nullopt when the goal is unreachable. from == to yields the empty path.
std::optional<Path> shortest_path(const TopologicalMap& map, NodeId from, NodeId to,
                                  const EdgePredicate& traversable);
std::optional<Path> shortest_path(const TopologicalMap& map, NodeId from, NodeId to);

}  // namespace travnav
