#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "travnav/env.hpp"
#include "travnav/model.hpp"
#include "travnav/observation.hpp"
#include "travnav/topology.hpp"

namespace travnav {

// Knowledge state of a simulated walker. Edges outside both masks are
// unknown. Maps stay at desk scale here, so 64 bits per mask suffice; the
// planners reject larger maps.
struct KnowledgeMask {
    uint64_t free = 0;
    uint64_t blocked = 0;

    bool known(EdgeId e) const { return ((free | blocked) >> e) & 1; }
    bool known_free(EdgeId e) const { return (free >> e) & 1; }
    bool known_blocked(EdgeId e) const { return (blocked >> e) & 1; }
    void mark(EdgeId e, bool is_free) {
        if (is_free)
            free |= uint64_t{1} << e;
        else
            blocked |= uint64_t{1} << e;
    }
    auto operator<=>(const KnowledgeMask&) const = default;
};

struct RolloutState {
    NodeId node = 0;
    KnowledgeMask known;
    auto operator<=>(const RolloutState&) const = default;
};

struct UctCandidate {
    NodeId node = 0;
    EdgeId edge = 0;
    double dist = 0.0;      // travel distance of the connecting edge
    int visits = 0;         // rollouts through the extended prefix
    double mean_cost = 0.0; // mean cost-to-go of those rollouts
};

// Upper-confidence selection: maximizes
//   bias * sqrt(ln(parent_visits) / visits) - dist - mean_cost.
// Unvisited candidates win over any visited one; ties go to the smallest
// node id. Returns an index into candidates.
int uct_select(double exploration_bias, int parent_visits, std::span<const UctCandidate> candidates);

struct PlannerParams {
    int rollouts = 50;               // per decision
    double exploration_bias = -1.0;  // < 0 resolves to the map's mean edge length
    double gamma = 0.95;             // decay of the exploration term over runs
    double zeta = -1.0;              // meters per bit; < 0 resolves to mean edge length
    uint64_t seed = 0;
    double unreachable_penalty_factor = 4.0;  // times total edge length
};

struct PlanDecision {
    Path path;                    // starts at the robot's node; empty when unreachable
    double expected_length = 0.0; // mean rollout travel distance of the chosen walk
    double info_gain = 0.0;       // bits
    double cost = 0.0;            // expected_length - gamma^runs * zeta * info_gain
    bool fallback = false;        // no rollout reached the goal; optimistic path returned
    bool unreachable = false;
    int failed_rollouts = 0;
    int rollouts = 0;
    int root_child_visits = 0;  // rollouts that descended into some root child
};

// World sample consistent with the current knowledge: observed edges keep
// their observed state, each unobserved edge is drawn independently from its
// predicted marginal.
EnvConfiguration sample_rollout_config(const BeliefState& belief, const ObservationSet& known,
                                       uint64_t seed);

// Eq.-style path information gain: every unobserved edge contributes the
// largest pairwise MI linking it to any *other* edge of the path, so no edge
// is credited twice.
double path_info_gain(const FactorGraphModel& model, std::span<const EdgeId> path_edges,
                      std::span<const EdgeId> unobserved);

// Rollout-based planners. plan_ctp_uct minimizes the mean rollout distance;
// plan_ours subtracts the decayed information-gain term before choosing.
PlanDecision plan_ctp_uct(const TopologicalMap& map, const BeliefState& belief,
                          const ObservationSet& known, NodeId start, NodeId goal,
                          const PlannerParams& params);
PlanDecision plan_ours(const TopologicalMap& map, const FactorGraphModel& model,
                       const BeliefState& belief, const ObservationSet& known, NodeId start,
                       NodeId goal, int runs_so_far, const PlannerParams& params);

// Optimistic shortest path: every edge not known blocked is assumed free.
std::optional<Path> plan_spo(const TopologicalMap& map, const ObservationSet& known, NodeId start,
                             NodeId goal);

struct SpdPlan {
    std::optional<Path> path;
    std::vector<int> determinized;  // max-product assignment, observed edges clamped
    bool fallback = false;          // determinized world had no route; optimistic path used
};

// Most-likely-world baseline: determinize the belief with max-product, then
// plan on the determinized configuration.
SpdPlan plan_spd(const TopologicalMap& map, const FactorGraphModel& model,
                 const ObservationSet& known, NodeId start, NodeId goal);

// Ground-truth shortest path; the lower-bound reference.
std::optional<Path> plan_optimal(const TopologicalMap& map, const EnvConfiguration& truth,
                                 NodeId start, NodeId goal);

}  // namespace travnav
