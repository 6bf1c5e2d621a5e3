#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "travnav/env.hpp"
#include "travnav/model.hpp"
#include "travnav/planner.hpp"
#include "travnav/topology.hpp"

namespace travnav {

enum class PlannerKind { ours, ctp_uct, spd, spo, optimal };

PlannerKind parse_planner_kind(const std::string& name);
std::string planner_kind_name(PlannerKind kind);

// One experiment arm: a planning policy plus, where the policy needs
// predictions, its own factor-graph model. Arms never share observations.
struct PlannerArm {
    PlannerKind kind = PlannerKind::spo;
    std::string label;
    PlannerParams params;
    std::unique_ptr<FactorGraphModel> model;  // null for spo / optimal
    int completed_runs = 0;
    uint64_t seed = 0;
};

PlannerArm make_arm(PlannerKind kind, const std::string& label, const PlannerParams& params,
                    int edge_count, const ModelParams& model_params, const BpSettings& bp,
                    uint64_t seed);

struct RunResult {
    int run = 0;
    Task task;
    std::string planner;
    double traveled = 0.0;
    bool reached = false;
    int replans = 0;  // plans beyond the first
    int observations = 0;
    std::vector<EdgeId> crossed;  // event log: edges in traversal order
    double optimal = -1.0;  // -1 when the goal is unreachable in truth
    double spo = -1.0;
    double normalized = 0.0;
    bool normalized_valid = false;
};

struct ExperimentLog {
    std::vector<RunResult> results;
    uint64_t seed = 0;
};

// Walks one navigation run under the observation rule: on arriving at a
// node the robot observes all adjacent edges; it replans per the arm's
// policy, and updates the arm's model exactly once after the run ends.
RunResult execute_run(const TopologicalMap& map, const EnvConfiguration& truth, const Task& task,
                      PlannerArm& arm, int run_index);

using CheckpointFn = std::function<void(int run, const std::string& label, const FactorGraphModel&)>;

struct NavExperimentParams {
    int runs = 500;
    uint64_t seed = 0;
    int checkpoint_interval = 0;  // 0 disables model checkpoints
    CheckpointFn on_checkpoint;
};

ExperimentLog run_navigation_experiment(const TopologicalMap& map, const EnvGenerator& gen,
                                        const TaskSequence& tasks, std::vector<PlannerArm>& arms,
                                        const NavExperimentParams& params);

struct PredictionRow {
    std::string model;
    int train_size = 0;
    double rms = 0.0;
};

struct PredictionTable {
    std::vector<PredictionRow> rows;
};

struct PredictionExperimentParams {
    std::vector<std::string> models{"independent", "factor_graph", "full_joint"};
    std::vector<int> train_sizes{10, 100, 1000, 10000};
    int test_count = 10000;
    double observed_fraction = 0.5;
    uint64_t seed = 0;
    ModelParams model_params;
    BpSettings bp;
};

// Trains each model on full-configuration streams and reports the RMS error
// of its predictions on partially revealed test worlds at each train size.
PredictionTable run_prediction_experiment(const TopologicalMap& map, const EnvGenerator& gen,
                                          const PredictionExperimentParams& params);

// CSV emission; schemas documented in the README.
std::string runs_csv(const ExperimentLog& log);
std::string summary_csv(const ExperimentLog& log, int window);
std::string rms_csv(const PredictionTable& table);

}  // namespace travnav
