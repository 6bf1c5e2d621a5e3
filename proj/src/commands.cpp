#include "travnav/commands.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "travnav/env.hpp"
#include "travnav/rng.hpp"
#include "travnav/sim.hpp"

namespace travnav {

namespace {

constexpr uint64_t kEnvTag = 0x656e76;
constexpr uint64_t kTaskSeedTag = 0x74736b;
constexpr uint64_t kArmSeedTag = 0x61726d;
constexpr uint64_t kPredTag = 0x707264;

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

std::filesystem::path prepare_output(const ExperimentConfig& config) {
    std::filesystem::path dir(config.output_dir);
    std::filesystem::create_directories(dir);
    write_file(dir / "resolved-config.json", resolved_config_json(config));
    return dir;
}

TopologicalMap load_map_checked(const std::string& path) {
    if (path.empty()) throw std::invalid_argument("no map given (use --map or the config file)");
    return TopologicalMap::load_file(path);
}

EnvGenerator build_env_generator(const ExperimentConfig& config, const TopologicalMap& map) {
    const uint64_t env_seed = mix_seed(config.seed, kEnvTag);
    if (!config.env.templates_path.empty()) {
        std::ifstream in(config.env.templates_path);
        if (!in) throw std::invalid_argument("cannot open " + config.env.templates_path);
        std::stringstream buf;
        buf << in.rdbuf();
        EnvGenerator gen;
        gen.kind = EnvGenerator::Kind::templates;
        gen.templates = parse_templates(buf.str());
        gen.edge_count = map.edge_count();
        gen.seed = gen.templates.seed;
        if (gen.templates.edge_count != map.edge_count())
            throw std::invalid_argument("template file does not match map edge count");
        return gen;
    }
    if (config.env.mode == "templates")
        return make_template_generator(map, config.env.templates, config.env.noise,
                                       config.env.free_prob, env_seed);
    return make_independent_generator(map, config.env.free_prob, env_seed);
}

TaskSequence build_tasks(const ExperimentConfig& config, const TopologicalMap& map) {
    if (!config.tasks.path.empty()) {
        std::ifstream in(config.tasks.path);
        if (!in) throw std::invalid_argument("cannot open " + config.tasks.path);
        std::stringstream buf;
        buf << in.rdbuf();
        TaskSequence seq = parse_tasks(buf.str());
        for (const Task& t : seq.tasks)
            if (t.start >= map.node_count() || t.goal >= map.node_count())
                throw std::invalid_argument("task references a node outside the map");
        return seq;
    }
    return gen_tasks(map, config.tasks.cycle, mix_seed(config.seed, kTaskSeedTag));
}

}  // namespace

int cmd_gen_env(const ExperimentConfig& config) {
    const TopologicalMap map = load_map_checked(config.map_path);
    const auto dir = prepare_output(config);

    const EnvGenerator gen = build_env_generator(config, map);
    if (gen.kind == EnvGenerator::Kind::templates)
        write_file(dir / "templates.txt", format_templates(gen.templates));

    std::vector<EnvConfiguration> configs;
    configs.reserve(static_cast<size_t>(config.runs));
    for (int t = 0; t < config.runs; ++t) configs.push_back(gen.sample(t));
    write_file(dir / "configs.txt", format_configurations(configs));

    const TaskSequence tasks = build_tasks(config, map);
    write_file(dir / "tasks.txt", format_tasks(tasks));

    // summary: per-edge marginals and mean pairwise MI of what was written
    std::cout << "map: " << config.map_path << " (" << map.node_count() << " nodes, "
              << map.edge_count() << " edges)\n";
    std::cout << "configurations: " << configs.size() << ", tasks: " << tasks.cycle() << "\n";
    if (!configs.empty()) {
        std::cout << "per-edge marginal p(free):";
        for (int e = 0; e < map.edge_count(); ++e) {
            double sum = 0.0;
            for (const auto& c : configs) sum += c.free(e) ? 1.0 : 0.0;
            std::cout << ' ' << sum / static_cast<double>(configs.size());
        }
        std::cout << '\n';
        const auto mi = empirical_mi_matrix(configs);
        double total = 0.0;
        int pairs = 0;
        for (int i = 0; i < map.edge_count(); ++i)
            for (int j = i + 1; j < map.edge_count(); ++j) {
                total += mi[static_cast<size_t>(i) * map.edge_count() + j];
                ++pairs;
            }
        std::cout << "mean pairwise MI: " << (pairs ? total / pairs : 0.0) << " bits\n";
    }
    std::cout << "wrote " << (dir / "configs.txt").string() << ", " << (dir / "tasks.txt").string()
              << "\n";
    return 0;
}

int cmd_predict_exp(const ExperimentConfig& config) {
    const TopologicalMap map = load_map_checked(config.map_path);
    const auto dir = prepare_output(config);
    const EnvGenerator gen = build_env_generator(config, map);

    PredictionExperimentParams params;
    params.models = config.prediction.models;
    params.train_sizes = config.prediction.train_sizes;
    params.test_count = config.prediction.test_count;
    params.observed_fraction = config.prediction.observed_fraction;
    params.seed = mix_seed(config.seed, kPredTag);
    params.model_params = config.model;
    params.bp = config.bp;

    const PredictionTable table = run_prediction_experiment(map, gen, params);
    write_file(dir / "rms.csv", rms_csv(table));
    std::cout << rms_csv(table);
    std::cout << "wrote " << (dir / "rms.csv").string() << "\n";
    return 0;
}

int cmd_nav_exp(const ExperimentConfig& config) {
    const TopologicalMap map = load_map_checked(config.map_path);
    const auto dir = prepare_output(config);
    const EnvGenerator gen = build_env_generator(config, map);
    const TaskSequence tasks = build_tasks(config, map);

    std::vector<PlannerArm> arms;
    for (size_t i = 0; i < config.planners.size(); ++i) {
        const auto& pc = config.planners[i];
        arms.push_back(make_arm(parse_planner_kind(pc.name), pc.name, pc.params, map.edge_count(),
                                config.model, config.bp, mix_seed(config.seed, kArmSeedTag, i)));
    }

    NavExperimentParams params;
    params.runs = config.runs;
    params.seed = config.seed;
    params.checkpoint_interval = config.checkpoint_interval;
    if (params.checkpoint_interval > 0) {
        params.on_checkpoint = [&dir](int run, const std::string& label, const FactorGraphModel& model) {
            write_file(dir / ("checkpoint_" + label + "_run" + std::to_string(run) + ".counts"),
                       model.counts().serialize());
        };
    }

    const ExperimentLog log = run_navigation_experiment(map, gen, tasks, arms, params);
    write_file(dir / "runs.csv", runs_csv(log));
    write_file(dir / "summary.csv", summary_csv(log, config.summary_window));
    std::cout << summary_csv(log, config.summary_window);
    std::cout << "wrote " << (dir / "runs.csv").string() << ", " << (dir / "summary.csv").string()
              << "\n";
    return 0;
}

int cmd_plan(const PlanArgs& args) {
    const TopologicalMap map = load_map_checked(args.map_path);

    ModelParams mp = args.model_params;
    FactorGraphModel model(map.edge_count(), mp, args.bp);
    if (!args.model_path.empty()) {
        std::ifstream in(args.model_path);
        if (!in) throw std::invalid_argument("cannot open " + args.model_path);
        std::stringstream buf;
        buf << in.rdbuf();
        CountStore counts = CountStore::deserialize(buf.str());
        mp.unary_alpha = counts.unary_alpha();
        mp.pair_alpha = counts.pair_alpha();
        model = FactorGraphModel(map.edge_count(), mp, args.bp);
        model.restore_counts(std::move(counts));
    }

    ObservationSet obs;
    if (!args.obs_path.empty()) {
        std::ifstream in(args.obs_path);
        if (!in) throw std::invalid_argument("cannot open " + args.obs_path);
        int edge, state;
        while (in >> edge >> state) {
            if (state != 0 && state != 1)
                throw std::invalid_argument("observation state must be 0 or 1");
            obs.set(edge, state == 1);
        }
    }

    const BeliefState belief = model.predict(obs);
    PlanDecision decision;
    if (args.planner == "ours")
        decision = plan_ours(map, model, belief, obs, args.start, args.goal, args.runs_so_far,
                             args.params);
    else if (args.planner == "ctp-uct")
        decision = plan_ctp_uct(map, belief, obs, args.start, args.goal, args.params);
    else
        throw std::invalid_argument("plan: planner must be 'ours' or 'ctp-uct'");

    std::cout << "planner: " << args.planner << '\n';
    std::cout << "path:";
    for (NodeId v : decision.path.nodes) std::cout << ' ' << v;
    std::cout << '\n';
    std::cout << "expected_length: " << decision.expected_length << '\n';
    std::cout << "info_gain_bits: " << decision.info_gain << '\n';
    std::cout << "cost: " << decision.cost << '\n';
    std::cout << "fallback: " << (decision.fallback ? 1 : 0) << '\n';
    std::cout << "unreachable: " << (decision.unreachable ? 1 : 0) << '\n';
    return decision.unreachable ? 1 : 0;
}

}  // namespace travnav
