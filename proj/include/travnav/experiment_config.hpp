#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "travnav/bp.hpp"
#include "travnav/model.hpp"
#include "travnav/planner.hpp"

namespace travnav {

struct EnvConfig {
    std::string mode = "templates";  // "templates" or "independent"
    int templates = 3;
    double noise = 0.05;
    double free_prob = 0.5;
    std::string templates_path;  // load instead of generating when set
    std::string configs_path;    // replay a recorded sequence when set
};

struct TaskConfig {
    int cycle = 25;
    std::string path;  // load instead of generating when set
};

struct PlannerConfig {
    std::string name = "ours";
    PlannerParams params;
};

struct PredictionConfig {
    std::vector<std::string> models{"independent", "factor_graph", "full_joint"};
    std::vector<int> train_sizes{10, 100, 1000, 10000};
    int test_count = 10000;
    double observed_fraction = 0.5;
};

// Everything a command needs, resolved from defaults, an optional JSON
// config file, and CLI overrides. A single master seed drives every derived
// stream.
struct ExperimentConfig {
    std::string map_path;
    std::string output_dir = "out";
    uint64_t seed = 1;
    int runs = 500;
    int summary_window = 50;
    int checkpoint_interval = 0;
    EnvConfig env;
    TaskConfig tasks;
    std::vector<PlannerConfig> planners{{"ours", {}}, {"ctp-uct", {}}, {"spd", {}}, {"spo", {}}};
    BpSettings bp;
    ModelParams model;
    PredictionConfig prediction;
};

// "high-corr" or "low-corr"; mutates the env block only.
void apply_env_preset(ExperimentConfig& config, const std::string& preset);

ExperimentConfig parse_config_json(const std::string& text);
ExperimentConfig load_config_file(const std::string& path);

// Full provenance record written next to every command's outputs.
std::string resolved_config_json(const ExperimentConfig& config);

}  // namespace travnav
