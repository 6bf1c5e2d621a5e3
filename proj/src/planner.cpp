#include "travnav/planner.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <queue>
#include <stdexcept>

#include "travnav/rng.hpp"

namespace travnav {

namespace {

constexpr uint64_t kRolloutTag = 0x726f6c6c;

void check_map_size(const TopologicalMap& map) {
    if (map.edge_count() > 64)
        throw std::invalid_argument("planner: map too large (" + std::to_string(map.edge_count()) +
                                    " edges, knowledge masks hold 64)");
}

KnowledgeMask mask_of(const ObservationSet& known) {
    KnowledgeMask mask;
    for (const auto& [e, free] : known) mask.mark(e, free);
    return mask;
}

void reveal_at(const TopologicalMap& map, const EnvConfiguration& config, NodeId v,
               KnowledgeMask& know) {
    for (EdgeId e : map.adjacent_edges(v)) know.mark(e, config.free(e));
}

bool reachable_via_free(const TopologicalMap& map, const EnvConfiguration& config, NodeId from,
                        NodeId to) {
    if (from == to) return true;
    std::vector<char> seen(static_cast<size_t>(map.node_count()), 0);
    std::queue<NodeId> frontier;
    frontier.push(from);
    seen[static_cast<size_t>(from)] = 1;
    while (!frontier.empty()) {
        NodeId v = frontier.front();
        frontier.pop();
        for (EdgeId e : map.adjacent_edges(v)) {
            if (!config.free(e)) continue;
            NodeId w = map.other_end(e, v);
            if (w == to) return true;
            if (!seen[static_cast<size_t>(w)]) {
                seen[static_cast<size_t>(w)] = 1;
                frontier.push(w);
            }
        }
    }
    return false;
}

struct TreeNode {
    int visits = 0;
    double mean_cost = 0.0;
    std::map<RolloutState, std::unique_ptr<TreeNode>> children;
};

struct WalkOutcome {
    std::vector<NodeId> nodes;
    std::vector<EdgeId> edges;
    double cost = 0.0;  // realized cost-to-go from the start state
    bool reached = false;
};

// One rollout: UCT descent through the tree until an unvisited state is
// expanded, then an optimistic shortest-path walk to the goal. Knowledge
// grows by observing all adjacent edges at every visited node.
WalkOutcome run_rollout(const TopologicalMap& map, const EnvConfiguration& config, NodeId start,
                        NodeId goal, const KnowledgeMask& initial_know, TreeNode& root, double bias,
                        double penalty) {
    WalkOutcome out;
    out.nodes.push_back(start);

    KnowledgeMask know = initial_know;
    NodeId at = start;
    reveal_at(map, config, at, know);

    std::vector<TreeNode*> prefix{&root};
    std::vector<double> dist_at{0.0};

    if (!reachable_via_free(map, config, start, goal)) {
        out.cost = penalty;
    } else {
        bool in_tree = true;
        TreeNode* node = &root;
        while (at != goal) {
            if (in_tree) {
                std::vector<UctCandidate> candidates;
                std::vector<RolloutState> child_states;
                for (EdgeId e : map.adjacent_edges(at)) {
                    if (!config.free(e)) continue;
                    const NodeId w = map.other_end(e, at);
                    KnowledgeMask next_know = know;
                    reveal_at(map, config, w, next_know);
                    candidates.push_back({w, e, map.edge(e).length, 0, 0.0});
                    child_states.push_back({w, next_know});
                }
                if (candidates.empty()) {
                    out.cost += penalty;
                    break;
                }
                // stable candidate order: by node id
                std::vector<size_t> idx(candidates.size());
                for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
                std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) {
                    return candidates[a].node < candidates[b].node;
                });
                std::vector<UctCandidate> ordered;
                std::vector<RolloutState> ordered_states;
                for (size_t i : idx) {
                    ordered.push_back(candidates[i]);
                    ordered_states.push_back(child_states[i]);
                }
                for (size_t i = 0; i < ordered.size(); ++i) {
                    auto it = node->children.find(ordered_states[i]);
                    if (it != node->children.end()) {
                        ordered[i].visits = it->second->visits;
                        ordered[i].mean_cost = it->second->mean_cost;
                    }
                }
                const int pick = uct_select(bias, node->visits, ordered);
                const UctCandidate& chosen = ordered[static_cast<size_t>(pick)];

                out.cost += chosen.dist;
                at = chosen.node;
                know = ordered_states[static_cast<size_t>(pick)].known;
                out.nodes.push_back(at);
                out.edges.push_back(chosen.edge);

                auto& slot = node->children[ordered_states[static_cast<size_t>(pick)]];
                if (!slot) slot = std::make_unique<TreeNode>();
                node = slot.get();
                prefix.push_back(node);
                dist_at.push_back(out.cost);
                if (node->visits == 0) in_tree = false;  // expanded; roll out from here
            } else {
                auto plan = shortest_path(map, at, goal,
                                          [&](EdgeId e) { return !know.known_blocked(e); });
                if (!plan) {  // cannot happen while the goal is free-reachable
                    out.cost += penalty;
                    break;
                }
                bool interrupted = false;
                for (size_t step = 0; step < plan->edges.size() && !interrupted; ++step) {
                    // every plan edge is checked against knowledge gained
                    // since the replan before it is crossed
                    bool invalid = false;
                    for (size_t rest = step; rest < plan->edges.size(); ++rest)
                        if (know.known_blocked(plan->edges[rest])) {
                            invalid = true;
                            break;
                        }
                    if (invalid) {
                        interrupted = true;
                        break;
                    }
                    const EdgeId e = plan->edges[step];
                    out.cost += map.edge(e).length;
                    at = plan->nodes[step + 1];
                    reveal_at(map, config, at, know);
                    out.nodes.push_back(at);
                    out.edges.push_back(e);
                    if (at == goal) break;
                }
            }
        }
        out.reached = (at == goal);
    }

    for (size_t i = 0; i < prefix.size(); ++i) {
        const double cost_to_go = out.cost - dist_at[i];
        TreeNode* n = prefix[i];
        ++n->visits;
        n->mean_cost += (cost_to_go - n->mean_cost) / n->visits;
    }
    return out;
}

struct CandidateAgg {
    Path path;
    double mean_cost = 0.0;
    int count = 0;
};

PlanDecision plan_rollouts(const TopologicalMap& map, const BeliefState& belief,
                           const ObservationSet& known, NodeId start, NodeId goal,
                           const PlannerParams& params, const FactorGraphModel* gain_model,
                           double gain_weight) {
    check_map_size(map);
    if (params.rollouts < 1) throw std::invalid_argument("planner: need at least one rollout");

    PlanDecision decision;
    if (start == goal) {
        decision.path.nodes.push_back(start);
        return decision;
    }

    const double bias = params.exploration_bias >= 0.0 ? params.exploration_bias : map.mean_edge_length();
    const double penalty = params.unreachable_penalty_factor * map.total_edge_length();
    const KnowledgeMask initial_know = mask_of(known);

    TreeNode root;
    std::map<std::vector<NodeId>, CandidateAgg> candidates;
    int failed = 0;
    for (int k = 0; k < params.rollouts; ++k) {
        const EnvConfiguration config =
            sample_rollout_config(belief, known, mix_seed(params.seed, kRolloutTag, static_cast<uint64_t>(k)));
        WalkOutcome walk = run_rollout(map, config, start, goal, initial_know, root, bias, penalty);
        if (!walk.reached) {
            ++failed;
            continue;
        }
        auto [it, inserted] = candidates.try_emplace(walk.nodes);
        if (inserted) {
            it->second.path.nodes = walk.nodes;
            it->second.path.edges = walk.edges;
            for (EdgeId e : walk.edges) it->second.path.length += map.edge(e).length;
        }
        CandidateAgg& agg = it->second;
        ++agg.count;
        agg.mean_cost += (walk.cost - agg.mean_cost) / agg.count;
    }
    decision.failed_rollouts = failed;
    decision.rollouts = params.rollouts;
    for (const auto& [state, child] : root.children) decision.root_child_visits += child->visits;

    if (candidates.empty()) {
        decision.fallback = true;
        auto spo = plan_spo(map, known, start, goal);
        if (!spo) {
            decision.unreachable = true;
            return decision;
        }
        decision.path = *spo;
        decision.expected_length = spo->length;
        if (gain_model) {
            std::vector<EdgeId> unobserved;
            for (int e = 0; e < map.edge_count(); ++e)
                if (!known.contains(e)) unobserved.push_back(e);
            decision.info_gain = path_info_gain(*gain_model, spo->edges, unobserved);
        }
        decision.cost = decision.expected_length - gain_weight * decision.info_gain;
        return decision;
    }

    std::vector<EdgeId> unobserved;
    if (gain_model)
        for (int e = 0; e < map.edge_count(); ++e)
            if (!known.contains(e)) unobserved.push_back(e);

    bool first = true;
    for (const auto& [nodes, agg] : candidates) {
        const double gain = gain_model ? path_info_gain(*gain_model, agg.path.edges, unobserved) : 0.0;
        const double cost = agg.mean_cost - gain_weight * gain;
        if (first || cost < decision.cost) {
            first = false;
            decision.path = agg.path;
            decision.expected_length = agg.mean_cost;
            decision.info_gain = gain;
            decision.cost = cost;
        }
    }
    return decision;
}

}  // namespace

int uct_select(double exploration_bias, int parent_visits, std::span<const UctCandidate> candidates) {
    if (candidates.empty()) throw std::invalid_argument("uct_select: no candidates");

    int best = -1;
    for (size_t i = 0; i < candidates.size(); ++i) {
        if (candidates[i].visits != 0) continue;
        if (best == -1 || candidates[i].node < candidates[static_cast<size_t>(best)].node)
            best = static_cast<int>(i);
    }
    if (best != -1) return best;

    const double log_parent = std::log(static_cast<double>(std::max(parent_visits, 1)));
    double best_score = -std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < candidates.size(); ++i) {
        const auto& c = candidates[i];
        const double score =
            exploration_bias * std::sqrt(log_parent / c.visits) - c.dist - c.mean_cost;
        if (best == -1 || score > best_score ||
            (score == best_score && c.node < candidates[static_cast<size_t>(best)].node)) {
            best = static_cast<int>(i);
            best_score = score;
        }
    }
    return best;
}

EnvConfiguration sample_rollout_config(const BeliefState& belief, const ObservationSet& known,
                                       uint64_t seed) {
    const int m = belief.edge_count();
    EnvConfiguration cfg;
    cfg.run = known.run();
    cfg.bits.resize(static_cast<size_t>(m));
    Rng rng(seed);
    for (int e = 0; e < m; ++e) {
        if (auto state = known.get(e)) {
            if (belief.observed[static_cast<size_t>(e)] &&
                belief.marginal[static_cast<size_t>(e)] != (*state ? 1.0 : 0.0))
                throw std::logic_error("sample_rollout_config: belief conflicts with observations");
            cfg.bits[static_cast<size_t>(e)] = *state ? 1 : 0;
        } else {
            cfg.bits[static_cast<size_t>(e)] = rng.bernoulli(belief.marginal[static_cast<size_t>(e)]) ? 1 : 0;
        }
    }
    return cfg;
}

double path_info_gain(const FactorGraphModel& model, std::span<const EdgeId> path_edges,
                      std::span<const EdgeId> unobserved) {
    if (path_edges.empty()) throw std::invalid_argument("path_info_gain: empty path");
    double gain = 0.0;
    for (EdgeId u : unobserved) {
        double best = 0.0;
        for (EdgeId p : path_edges) {
            if (p == u) continue;
            best = std::max(best, model.pairwise_mi(p, u));
        }
        gain += best;
    }
    return gain;
}

PlanDecision plan_ctp_uct(const TopologicalMap& map, const BeliefState& belief,
                          const ObservationSet& known, NodeId start, NodeId goal,
                          const PlannerParams& params) {
    return plan_rollouts(map, belief, known, start, goal, params, nullptr, 0.0);
}

PlanDecision plan_ours(const TopologicalMap& map, const FactorGraphModel& model,
                       const BeliefState& belief, const ObservationSet& known, NodeId start,
                       NodeId goal, int runs_so_far, const PlannerParams& params) {
    if (runs_so_far < 0) throw std::invalid_argument("plan_ours: runs_so_far must be non-negative");
    const double zeta = params.zeta >= 0.0 ? params.zeta : map.mean_edge_length();
    const double weight = std::pow(params.gamma, runs_so_far) * zeta;
    return plan_rollouts(map, belief, known, start, goal, params, &model, weight);
}

std::optional<Path> plan_spo(const TopologicalMap& map, const ObservationSet& known, NodeId start,
                             NodeId goal) {
    return shortest_path(map, start, goal, [&](EdgeId e) {
        auto state = known.get(e);
        return !(state.has_value() && !*state);
    });
}

SpdPlan plan_spd(const TopologicalMap& map, const FactorGraphModel& model,
                 const ObservationSet& known, NodeId start, NodeId goal) {
    SpdPlan plan;
    const FactorGraph graph = model.build_graph(known);
    plan.determinized = map_configuration(graph, model.bp_settings());
    plan.path = shortest_path(map, start, goal,
                              [&](EdgeId e) { return plan.determinized[static_cast<size_t>(e)] == 1; });
    if (!plan.path) {
        plan.fallback = true;
        plan.path = plan_spo(map, known, start, goal);
    }
    return plan;
}

std::optional<Path> plan_optimal(const TopologicalMap& map, const EnvConfiguration& truth,
                                 NodeId start, NodeId goal) {
    return shortest_path(map, start, goal, [&](EdgeId e) { return truth.free(e); });
}

}  // namespace travnav
