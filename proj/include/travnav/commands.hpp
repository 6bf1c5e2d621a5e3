#pragma once

#include <string>

#include "travnav/experiment_config.hpp"

namespace travnav {

// gen-env: writes templates.txt (templates mode), configs.txt and tasks.txt
// plus resolved-config.json into the output directory; prints summary stats.
int cmd_gen_env(const ExperimentConfig& config);

// predict-exp: writes rms.csv and resolved-config.json.
int cmd_predict_exp(const ExperimentConfig& config);

// nav-exp: writes runs.csv, summary.csv, resolved-config.json and optional
// model checkpoints.
int cmd_nav_exp(const ExperimentConfig& config);

struct PlanArgs {
    std::string map_path;
    std::string model_path;  // serialized count store; optional
    std::string obs_path;    // lines of "<edge_id> <0|1>"; optional
    std::string planner = "ours";
    NodeId start = 0;
    NodeId goal = 0;
    int runs_so_far = 0;
    PlannerParams params;
    BpSettings bp;
    ModelParams model_params;
};

// plan: prints the decision as a structured text record on stdout.
int cmd_plan(const PlanArgs& args);

}  // namespace travnav
