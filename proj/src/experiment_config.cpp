#include "travnav/experiment_config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace travnav {

namespace {

using nlohmann::json;

BpSchedule parse_schedule(const std::string& name) {
    if (name == "synchronous") return BpSchedule::synchronous;
    if (name == "random-sequential") return BpSchedule::random_sequential;
    throw std::invalid_argument("config: unknown bp schedule '" + name + "'");
}

std::string schedule_name(BpSchedule s) {
    return s == BpSchedule::synchronous ? "synchronous" : "random-sequential";
}

void parse_planner_params(const json& j, PlannerParams& p) {
    if (j.contains("rollouts")) p.rollouts = j["rollouts"].get<int>();
    if (j.contains("exploration_bias")) p.exploration_bias = j["exploration_bias"].get<double>();
    if (j.contains("gamma")) p.gamma = j["gamma"].get<double>();
    if (j.contains("zeta")) p.zeta = j["zeta"].get<double>();
    if (j.contains("unreachable_penalty_factor"))
        p.unreachable_penalty_factor = j["unreachable_penalty_factor"].get<double>();
}

void validate(const ExperimentConfig& c) {
    if (c.runs < 0) throw std::invalid_argument("config: runs must be non-negative");
    if (c.tasks.cycle < 1) throw std::invalid_argument("config: task cycle must be positive");
    if (c.env.mode != "templates" && c.env.mode != "independent")
        throw std::invalid_argument("config: env.mode must be 'templates' or 'independent'");
    if (c.env.templates < 1) throw std::invalid_argument("config: env.templates must be >= 1");
    if (!(c.env.noise >= 0.0 && c.env.noise < 0.5))
        throw std::invalid_argument("config: env.noise must be in [0, 0.5)");
    if (!(c.env.free_prob > 0.0 && c.env.free_prob <= 1.0))
        throw std::invalid_argument("config: env.free_prob must be in (0, 1]");
    if (!(c.model.unary_alpha > 0.0) || !(c.model.pair_alpha > 0.0))
        throw std::invalid_argument("config: pseudocounts must be positive");
    if (c.summary_window < 1) throw std::invalid_argument("config: summary_window must be positive");
    for (const auto& p : c.planners) {
        if (p.params.rollouts < 1) throw std::invalid_argument("config: planner rollouts must be >= 1");
        if (!(p.params.gamma >= 0.0 && p.params.gamma <= 1.0))
            throw std::invalid_argument("config: planner gamma must be in [0, 1]");
    }
}

}  // namespace

void apply_env_preset(ExperimentConfig& config, const std::string& preset) {
    if (preset == "high-corr") {
        config.env.mode = "templates";
        config.env.templates = 3;
        config.env.noise = 0.05;
        config.env.free_prob = 0.5;
    } else if (preset == "low-corr") {
        config.env.mode = "independent";
        config.env.free_prob = 0.5;
    } else {
        throw std::invalid_argument("config: unknown preset '" + preset + "'");
    }
}

ExperimentConfig parse_config_json(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: malformed json: ") + e.what());
    }

    ExperimentConfig c;
    if (doc.contains("map")) c.map_path = doc["map"].get<std::string>();
    if (doc.contains("output")) c.output_dir = doc["output"].get<std::string>();
    if (doc.contains("seed")) c.seed = doc["seed"].get<uint64_t>();
    if (doc.contains("runs")) c.runs = doc["runs"].get<int>();
    if (doc.contains("summary_window")) c.summary_window = doc["summary_window"].get<int>();
    if (doc.contains("checkpoint_interval")) c.checkpoint_interval = doc["checkpoint_interval"].get<int>();

    if (doc.contains("env")) {
        const auto& je = doc["env"];
        if (je.contains("preset")) apply_env_preset(c, je["preset"].get<std::string>());
        if (je.contains("mode")) c.env.mode = je["mode"].get<std::string>();
        if (je.contains("templates")) c.env.templates = je["templates"].get<int>();
        if (je.contains("noise")) c.env.noise = je["noise"].get<double>();
        if (je.contains("free_prob")) c.env.free_prob = je["free_prob"].get<double>();
        if (je.contains("templates_path")) c.env.templates_path = je["templates_path"].get<std::string>();
        if (je.contains("configs_path")) c.env.configs_path = je["configs_path"].get<std::string>();
    }
    if (doc.contains("tasks")) {
        const auto& jt = doc["tasks"];
        if (jt.contains("cycle")) c.tasks.cycle = jt["cycle"].get<int>();
        if (jt.contains("path")) c.tasks.path = jt["path"].get<std::string>();
    }
    if (doc.contains("planners")) {
        c.planners.clear();
        for (const auto& jp : doc["planners"]) {
            PlannerConfig pc;
            pc.name = jp.at("name").get<std::string>();
            parse_planner_params(jp, pc.params);
            c.planners.push_back(pc);
        }
    }
    if (doc.contains("bp")) {
        const auto& jb = doc["bp"];
        if (jb.contains("max_iterations")) c.bp.max_iterations = jb["max_iterations"].get<int>();
        if (jb.contains("tolerance")) c.bp.tolerance = jb["tolerance"].get<double>();
        if (jb.contains("damping")) c.bp.damping = jb["damping"].get<double>();
        if (jb.contains("schedule")) c.bp.schedule = parse_schedule(jb["schedule"].get<std::string>());
        if (jb.contains("seed")) c.bp.seed = jb["seed"].get<uint64_t>();
    }
    if (doc.contains("model")) {
        const auto& jm = doc["model"];
        if (jm.contains("unary_alpha")) c.model.unary_alpha = jm["unary_alpha"].get<double>();
        if (jm.contains("pair_alpha")) c.model.pair_alpha = jm["pair_alpha"].get<double>();
        if (jm.contains("mi_threshold")) c.model.mi_threshold = jm["mi_threshold"].get<double>();
    }
    if (doc.contains("prediction")) {
        const auto& jp = doc["prediction"];
        if (jp.contains("models")) c.prediction.models = jp["models"].get<std::vector<std::string>>();
        if (jp.contains("train_sizes")) c.prediction.train_sizes = jp["train_sizes"].get<std::vector<int>>();
        if (jp.contains("test_count")) c.prediction.test_count = jp["test_count"].get<int>();
        if (jp.contains("observed_fraction"))
            c.prediction.observed_fraction = jp["observed_fraction"].get<double>();
    }
    validate(c);
    return c;
}

ExperimentConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_json(buf.str());
}

std::string resolved_config_json(const ExperimentConfig& c) {
    json doc;
    doc["map"] = c.map_path;
    doc["output"] = c.output_dir;
    doc["seed"] = c.seed;
    doc["runs"] = c.runs;
    doc["summary_window"] = c.summary_window;
    doc["checkpoint_interval"] = c.checkpoint_interval;
    doc["env"] = {{"mode", c.env.mode},
                  {"templates", c.env.templates},
                  {"noise", c.env.noise},
                  {"free_prob", c.env.free_prob}};
    if (!c.env.templates_path.empty()) doc["env"]["templates_path"] = c.env.templates_path;
    if (!c.env.configs_path.empty()) doc["env"]["configs_path"] = c.env.configs_path;
    doc["tasks"] = {{"cycle", c.tasks.cycle}};
    if (!c.tasks.path.empty()) doc["tasks"]["path"] = c.tasks.path;
    doc["planners"] = json::array();
    for (const auto& p : c.planners)
        doc["planners"].push_back({{"name", p.name},
                                   {"rollouts", p.params.rollouts},
                                   {"exploration_bias", p.params.exploration_bias},
                                   {"gamma", p.params.gamma},
                                   {"zeta", p.params.zeta},
                                   {"unreachable_penalty_factor", p.params.unreachable_penalty_factor}});
    doc["bp"] = {{"max_iterations", c.bp.max_iterations},
                 {"tolerance", c.bp.tolerance},
                 {"damping", c.bp.damping},
                 {"schedule", schedule_name(c.bp.schedule)},
                 {"seed", c.bp.seed}};
    doc["model"] = {{"unary_alpha", c.model.unary_alpha},
                    {"pair_alpha", c.model.pair_alpha},
                    {"mi_threshold", c.model.mi_threshold}};
    doc["prediction"] = {{"models", c.prediction.models},
                         {"train_sizes", c.prediction.train_sizes},
                         {"test_count", c.prediction.test_count},
                         {"observed_fraction", c.prediction.observed_fraction}};
    return doc.dump(2) + "\n";
}

}  // namespace travnav
