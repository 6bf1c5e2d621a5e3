#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "travnav/commands.hpp"
#include "travnav/sim.hpp"

namespace {

struct CommonOpts {
    std::string config_path;
    std::string map_path;
    std::string output_dir;
    std::string preset;
    int64_t seed = -1;
    int runs = -1;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file");
    cmd->add_option("--map", opts.map_path, "topological map file");
    cmd->add_option("--output", opts.output_dir, "output directory");
    cmd->add_option("--preset", opts.preset, "environment preset: high-corr or low-corr");
    cmd->add_option("--seed", opts.seed, "master seed");
    cmd->add_option("--runs", opts.runs, "number of runs / configurations");
}

travnav::ExperimentConfig resolve(const CommonOpts& opts) {
    travnav::ExperimentConfig config;
    if (!opts.config_path.empty()) config = travnav::load_config_file(opts.config_path);
    if (!opts.preset.empty()) travnav::apply_env_preset(config, opts.preset);
    if (!opts.map_path.empty()) config.map_path = opts.map_path;
    if (!opts.output_dir.empty()) config.output_dir = opts.output_dir;
    if (opts.seed >= 0) config.seed = static_cast<uint64_t>(opts.seed);
    if (opts.runs >= 0) config.runs = opts.runs;
    return config;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"traversability-pattern navigation experiments"};
    app.require_subcommand(1);

    CommonOpts gen_opts, pred_opts, nav_opts;
    int pred_test_count = -1;
    std::vector<std::string> nav_planners;
    int nav_checkpoint = -1;

    CLI::App* gen = app.add_subcommand("gen-env", "generate template, configuration and task files");
    add_common(gen, gen_opts);

    CLI::App* pred = app.add_subcommand("predict-exp", "prediction RMS experiment");
    add_common(pred, pred_opts);
    pred->add_option("--test-count", pred_test_count, "number of test configurations");

    CLI::App* nav = app.add_subcommand("nav-exp", "long-horizon navigation experiment");
    add_common(nav, nav_opts);
    nav->add_option("--planners", nav_planners,
                    "planner arms (ours, ctp-uct, spd, spo, optimal)")
        ->delimiter(',');
    nav->add_option("--checkpoint-interval", nav_checkpoint, "model checkpoint every N runs");

    travnav::PlanArgs plan_args;
    CLI::App* plan = app.add_subcommand("plan", "plan one decision from a map, model and observations");
    plan->add_option("--map", plan_args.map_path, "topological map file")->required();
    plan->add_option("--model", plan_args.model_path, "serialized count store");
    plan->add_option("--obs", plan_args.obs_path, "observation list: lines of '<edge> <0|1>'");
    plan->add_option("--planner", plan_args.planner, "ours or ctp-uct");
    plan->add_option("--start", plan_args.start, "start node")->required();
    plan->add_option("--goal", plan_args.goal, "goal node")->required();
    plan->add_option("--runs-so-far", plan_args.runs_so_far, "completed runs (decays exploration)");
    plan->add_option("--rollouts", plan_args.params.rollouts, "rollouts per decision");
    plan->add_option("--exploration-bias", plan_args.params.exploration_bias, "UCT bias B");
    plan->add_option("--gamma", plan_args.params.gamma, "exploration decay");
    plan->add_option("--zeta", plan_args.params.zeta, "meters per bit of information gain");
    int64_t plan_seed = 0;
    plan->add_option("--seed", plan_seed, "rollout seed");

    try {
        app.parse(argc, argv);
        if (gen->parsed()) return travnav::cmd_gen_env(resolve(gen_opts));
        if (pred->parsed()) {
            auto config = resolve(pred_opts);
            if (pred_test_count >= 0) config.prediction.test_count = pred_test_count;
            return travnav::cmd_predict_exp(config);
        }
        if (nav->parsed()) {
            auto config = resolve(nav_opts);
            if (!nav_planners.empty()) {
                config.planners.clear();
                for (const auto& name : nav_planners) {
                    travnav::parse_planner_kind(name);  // validate early
                    config.planners.push_back({name, {}});
                }
            }
            if (nav_checkpoint >= 0) config.checkpoint_interval = nav_checkpoint;
            return travnav::cmd_nav_exp(config);
        }
        if (plan->parsed()) {
            plan_args.params.seed = static_cast<uint64_t>(plan_seed);
            return travnav::cmd_plan(plan_args);
        }
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
