#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "travnav/topology.hpp"

namespace travnav {

// Ground-truth traversability of every edge during one run. Immutable: the
// world does not change within a run.
struct EnvConfiguration {
    int run = 0;
    std::vector<uint8_t> bits;  // 1 = free, 0 = blocked

    bool free(EdgeId e) const { return bits[static_cast<size_t>(e)] != 0; }
    int edge_count() const { return static_cast<int>(bits.size()); }
};

// Repeating-pattern generator: worlds are drawn by picking one of M fixed
// templates uniformly and flipping each bit independently with probability
// noise. noise must stay below 0.5 or the patterns wash out.
struct TemplateSet {
    int edge_count = 0;
    std::vector<std::vector<uint8_t>> templates;
    double noise = 0.0;
    uint64_t seed = 0;
};

TemplateSet gen_templates(const TopologicalMap& map, int count, double free_prob, uint64_t seed);

// Deterministic given (ts.seed, run); the run index only enters through the
// derived RNG stream.
EnvConfiguration sample_configuration(const TemplateSet& ts, int run);

// Per-edge independent Bernoulli worlds (the low-correlation setup).
EnvConfiguration sample_independent(int edge_count, double free_prob, uint64_t seed, int run);

// Empirical pairwise mutual information in bits over `samples` draws,
// row-major edge_count x edge_count, diagonal zero.
std::vector<double> correlation_profile(const TemplateSet& ts, int samples);

// Same estimate over an already-materialized set of configurations.
std::vector<double> empirical_mi_matrix(const std::vector<EnvConfiguration>& configs);

struct Task {
    NodeId start = 0;
    NodeId goal = 0;
};

struct TaskSequence {
    std::vector<Task> tasks;  // one cycle; run t uses tasks[t % size]
    const Task& at(int run) const { return tasks[static_cast<size_t>(run) % tasks.size()]; }
    int cycle() const { return static_cast<int>(tasks.size()); }
};

TaskSequence gen_tasks(const TopologicalMap& map, int cycle, uint64_t seed);

// Either a template mixture or an independent-edges world source.
struct EnvGenerator {
    enum class Kind { templates, independent };
    Kind kind = Kind::templates;
    TemplateSet templates;
    int edge_count = 0;
    double free_prob = 0.5;
    uint64_t seed = 0;

    EnvConfiguration sample(int run) const;
};

EnvGenerator make_template_generator(const TopologicalMap& map, int count, double noise,
                                     double free_prob, uint64_t seed);
EnvGenerator make_independent_generator(const TopologicalMap& map, double free_prob, uint64_t seed);

// Line-oriented replay formats.
std::string format_templates(const TemplateSet& ts);
TemplateSet parse_templates(const std::string& text);
std::string format_configurations(const std::vector<EnvConfiguration>& configs);
std::vector<EnvConfiguration> parse_configurations(const std::string& text);
std::string format_tasks(const TaskSequence& tasks);
TaskSequence parse_tasks(const std::string& text);

}  // namespace travnav
