#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "travnav/factor_graph.hpp"

namespace travnav {

enum class BpSchedule { synchronous, random_sequential };

struct BpSettings {
    int max_iterations = 200;
    double tolerance = 1e-6;  // L-inf change of any message entry per sweep
    double damping = 0.5;     // new = (1 - damping) * update + damping * old
    BpSchedule schedule = BpSchedule::synchronous;
    uint64_t seed = 0;  // sweep order for the random-sequential schedule
};

struct BpResult {
    std::vector<std::array<double, 2>> marginals;  // normalized; point mass for clamped vars
    bool converged = false;
    int iterations = 0;
    double max_delta = 0.0;
};

// Loopy sum-product with damped, normalized messages in the linear domain.
// The synchronous schedule updates every directed message from the previous
// sweep's state, so its result is independent of thread count; the inner
// sweep runs data-parallel under OpenMP.
BpResult run_bp(const FactorGraph& graph, const BpSettings& settings);

// Plain bipartite sum-product, one serial loop nest, no scheduling tricks.
// Kept as the reference implementation the tests and the benchmark compare
// the production kernel against. Same fixed points, independently written.
BpResult run_bp_reference(const FactorGraph& graph, const BpSettings& settings);

// Max-product variant: per-variable argmax of the max-marginals, ties toward
// state 1 (free). Clamped variables keep their clamped values.
std::vector<int> map_configuration(const FactorGraph& graph, const BpSettings& settings);

}  // namespace travnav
