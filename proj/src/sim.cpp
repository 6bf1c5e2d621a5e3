#include "travnav/sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

#include "travnav/rng.hpp"

namespace travnav {

namespace {

constexpr uint64_t kArmTag = 0x61726d;
constexpr uint64_t kDecisionTag = 0x646563;
constexpr int kTestStreamOffset = 1 << 20;  // test worlds never collide with training runs

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

void observe_adjacent(const TopologicalMap& map, const EnvConfiguration& truth, NodeId v,
                      ObservationSet& obs) {
    for (EdgeId e : map.adjacent_edges(v)) obs.set(e, truth.free(e));
}

bool remaining_path_blocked(const ObservationSet& obs, const std::vector<EdgeId>& edges,
                            size_t cursor) {
    for (size_t i = cursor; i < edges.size(); ++i) {
        auto state = obs.get(edges[i]);
        if (state.has_value() && !*state) return true;
    }
    return false;
}

bool contradicts_determinization(const ObservationSet& obs, const std::vector<int>& determinized) {
    for (const auto& [e, free] : obs)
        if (determinized[static_cast<size_t>(e)] != (free ? 1 : 0)) return true;
    return false;
}

}  // namespace

PlannerKind parse_planner_kind(const std::string& name) {
    if (name == "ours") return PlannerKind::ours;
    if (name == "ctp-uct") return PlannerKind::ctp_uct;
    if (name == "spd") return PlannerKind::spd;
    if (name == "spo") return PlannerKind::spo;
    if (name == "optimal") return PlannerKind::optimal;
    throw std::invalid_argument("unknown planner '" + name + "'");
}

std::string planner_kind_name(PlannerKind kind) {
    switch (kind) {
        case PlannerKind::ours: return "ours";
        case PlannerKind::ctp_uct: return "ctp-uct";
        case PlannerKind::spd: return "spd";
        case PlannerKind::spo: return "spo";
        case PlannerKind::optimal: return "optimal";
    }
    return "?";
}

PlannerArm make_arm(PlannerKind kind, const std::string& label, const PlannerParams& params,
                    int edge_count, const ModelParams& model_params, const BpSettings& bp,
                    uint64_t seed) {
    PlannerArm arm;
    arm.kind = kind;
    arm.label = label.empty() ? planner_kind_name(kind) : label;
    arm.params = params;
    arm.seed = seed;
    if (kind == PlannerKind::ours || kind == PlannerKind::ctp_uct || kind == PlannerKind::spd)
        arm.model = std::make_unique<FactorGraphModel>(edge_count, model_params, bp);
    return arm;
}

RunResult execute_run(const TopologicalMap& map, const EnvConfiguration& truth, const Task& task,
                      PlannerArm& arm, int run_index) {
    if (task.start == task.goal) throw std::invalid_argument("execute_run: start equals goal");
    if (truth.edge_count() != map.edge_count())
        throw std::invalid_argument("execute_run: configuration does not match map");

    RunResult result;
    result.run = run_index;
    result.task = task;
    result.planner = arm.label;

    ObservationSet obs(run_index);
    NodeId pos = task.start;
    observe_adjacent(map, truth, pos, obs);

    std::vector<NodeId> plan_nodes;
    std::vector<EdgeId> plan_edges;
    size_t cursor = 0;
    std::vector<int> determinized;
    bool need_plan = true;
    bool plan_invalidated = false;  // world contradicted the current plan
    int plans_made = 0;
    int replans = 0;
    bool aborted = false;

    while (pos != task.goal && !aborted) {
        if (need_plan) {
            std::optional<Path> path;
            switch (arm.kind) {
                case PlannerKind::spo:
                    path = plan_spo(map, obs, pos, task.goal);
                    break;
                case PlannerKind::optimal:
                    path = plan_optimal(map, truth, pos, task.goal);
                    break;
                case PlannerKind::spd: {
                    SpdPlan sp = plan_spd(map, *arm.model, obs, pos, task.goal);
                    determinized = sp.determinized;
                    path = sp.path;
                    break;
                }
                case PlannerKind::ctp_uct: {
                    PlannerParams p = arm.params;
                    p.seed = mix_seed(arm.seed, kDecisionTag, static_cast<uint64_t>(run_index),
                                      static_cast<uint64_t>(plans_made));
                    const BeliefState belief = arm.model->predict(obs);
                    PlanDecision d = plan_ctp_uct(map, belief, obs, pos, task.goal, p);
                    if (!d.unreachable) path = d.path;
                    break;
                }
                case PlannerKind::ours: {
                    PlannerParams p = arm.params;
                    p.seed = mix_seed(arm.seed, kDecisionTag, static_cast<uint64_t>(run_index),
                                      static_cast<uint64_t>(plans_made));
                    const BeliefState belief = arm.model->predict(obs);
                    PlanDecision d = plan_ours(map, *arm.model, belief, obs, pos, task.goal,
                                               arm.completed_runs, p);
                    if (!d.unreachable) path = d.path;
                    break;
                }
            }
            ++plans_made;
            if (!path) {
                aborted = true;  // unreachable under current knowledge
                break;
            }
            plan_nodes = path->nodes;
            plan_edges = path->edges;
            cursor = 0;
            need_plan = false;
            continue;
        }

        if (cursor >= plan_edges.size()) throw std::logic_error("execute_run: plan exhausted before goal");
        const EdgeId e = plan_edges[cursor];
        const NodeId next = plan_nodes[cursor + 1];
        // adjacency observation happened before the step, so a blocked edge
        // here means a policy failed to replan
        if (!truth.free(e)) throw std::logic_error("execute_run: attempted to cross a blocked edge");

        result.traveled += map.edge(e).length;
        result.crossed.push_back(e);
        pos = next;
        ++cursor;
        const int before = obs.size();
        observe_adjacent(map, truth, pos, obs);
        const bool new_reveal = obs.size() > before;

        switch (arm.kind) {
            case PlannerKind::ours:
            case PlannerKind::ctp_uct:
                if (new_reveal) need_plan = true;
                break;
            case PlannerKind::spo:
                if (remaining_path_blocked(obs, plan_edges, cursor)) need_plan = true;
                break;
            case PlannerKind::spd:
                if (contradicts_determinization(obs, determinized)) need_plan = true;
                break;
            case PlannerKind::optimal:
                break;
        }
    }

    result.reached = (pos == task.goal);
    result.replans = std::max(plans_made - 1, 0);
    result.observations = obs.size();

    // knowledge carries over between runs only through the model
    if (arm.model) arm.model->update(obs);
    ++arm.completed_runs;
    return result;
}

ExperimentLog run_navigation_experiment(const TopologicalMap& map, const EnvGenerator& gen,
                                        const TaskSequence& tasks, std::vector<PlannerArm>& arms,
                                        const NavExperimentParams& params) {
    ExperimentLog log;
    log.seed = params.seed;
    for (int t = 0; t < params.runs; ++t) {
        const EnvConfiguration truth = gen.sample(t);
        const Task& task = tasks.at(t);

        const auto optimal = plan_optimal(map, truth, task.start, task.goal);
        const double optimal_len = optimal ? optimal->length : -1.0;

        double spo_len = -1.0;
        if (optimal) {
            PlannerArm probe;  // fresh optimistic walker, memoryless by construction
            probe.kind = PlannerKind::spo;
            probe.label = "spo";
            spo_len = execute_run(map, truth, task, probe, t).traveled;
        }

        for (auto& arm : arms) {
            RunResult r = execute_run(map, truth, task, arm, t);
            r.optimal = optimal_len;
            r.spo = spo_len;
            if (r.reached && optimal && spo_len > optimal_len) {
                r.normalized = (r.traveled - optimal_len) / (spo_len - optimal_len);
                r.normalized_valid = true;
            }
            log.results.push_back(std::move(r));
        }

        if (params.checkpoint_interval > 0 && (t + 1) % params.checkpoint_interval == 0 &&
            params.on_checkpoint) {
            for (const auto& arm : arms)
                if (arm.model) params.on_checkpoint(t + 1, arm.label, *arm.model);
        }
    }
    return log;
}

PredictionTable run_prediction_experiment(const TopologicalMap& map, const EnvGenerator& gen,
                                          const PredictionExperimentParams& params) {
    const int m = map.edge_count();
    std::vector<int> sizes = params.train_sizes;
    std::sort(sizes.begin(), sizes.end());
    for (int s : sizes)
        if (s < 0) throw std::invalid_argument("prediction experiment: negative train size");
    if (params.test_count < 1) throw std::invalid_argument("prediction experiment: no test cases");
    if (!(params.observed_fraction >= 0.0 && params.observed_fraction <= 1.0))
        throw std::invalid_argument("prediction experiment: observed_fraction out of range");

    // fixed test set shared by every model and train size
    struct TestCase {
        EnvConfiguration truth;
        ObservationSet revealed;
    };
    const int reveal_count = static_cast<int>(std::lround(params.observed_fraction * m));
    std::vector<TestCase> tests;
    tests.reserve(static_cast<size_t>(params.test_count));
    for (int i = 0; i < params.test_count; ++i) {
        TestCase tc;
        tc.truth = gen.sample(kTestStreamOffset + i);
        Rng rng(mix_seed(params.seed, 0x74657374, static_cast<uint64_t>(i)));
        std::vector<int> order(static_cast<size_t>(m));
        for (int e = 0; e < m; ++e) order[static_cast<size_t>(e)] = e;
        for (int k = 0; k < reveal_count; ++k) {
            const int j = k + static_cast<int>(rng.below(static_cast<uint64_t>(m - k)));
            std::swap(order[static_cast<size_t>(k)], order[static_cast<size_t>(j)]);
            tc.revealed.set(order[static_cast<size_t>(k)], tc.truth.free(order[static_cast<size_t>(k)]));
        }
        tests.push_back(std::move(tc));
    }

    PredictionTable table;
    for (const std::string& kind : params.models) {
        std::unique_ptr<TravModel> model;
        if (kind == "independent")
            model = std::make_unique<IndependentModel>(m, params.model_params.unary_alpha);
        else if (kind == "factor_graph")
            model = std::make_unique<FactorGraphModel>(m, params.model_params, params.bp);
        else if (kind == "full_joint")
            model = std::make_unique<FullJointModel>(m);
        else
            throw std::invalid_argument("prediction experiment: unknown model '" + kind + "'");

        int trained = 0;
        for (int target : sizes) {
            for (; trained < target; ++trained)
                model->update(ObservationSet::full(gen.sample(trained)));

            // per-test error slots, summed in index order for determinism
            std::vector<double> sq(tests.size(), 0.0);
            std::vector<int> slots(tests.size(), 0);
            const TravModel* frozen = model.get();
#pragma omp parallel for schedule(dynamic, 16)
            for (int i = 0; i < static_cast<int>(tests.size()); ++i) {
                const TestCase& tc = tests[static_cast<size_t>(i)];
                const BeliefState belief = frozen->predict(tc.revealed);
                double acc = 0.0;
                int n = 0;
                for (int e = 0; e < m; ++e) {
                    if (tc.revealed.contains(e)) continue;
                    const double err =
                        belief.marginal[static_cast<size_t>(e)] - (tc.truth.free(e) ? 1.0 : 0.0);
                    acc += err * err;
                    ++n;
                }
                sq[static_cast<size_t>(i)] = acc;
                slots[static_cast<size_t>(i)] = n;
            }
            double total_sq = 0.0;
            long total_slots = 0;
            for (size_t i = 0; i < tests.size(); ++i) {
                total_sq += sq[i];
                total_slots += slots[i];
            }
            PredictionRow row;
            row.model = kind;
            row.train_size = target;
            row.rms = total_slots ? std::sqrt(total_sq / static_cast<double>(total_slots)) : 0.0;
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

std::string runs_csv(const ExperimentLog& log) {
    std::ostringstream out;
    out << "run,planner,task_start,task_goal,traveled,optimal,spo,normalized,reached,replans\n";
    for (const auto& r : log.results) {
        out << r.run << ',' << r.planner << ',' << r.task.start << ',' << r.task.goal << ','
            << format_double(r.traveled) << ',' << (r.optimal >= 0 ? format_double(r.optimal) : "na")
            << ',' << (r.spo >= 0 ? format_double(r.spo) : "na") << ','
            << (r.normalized_valid ? format_double(r.normalized) : "na") << ','
            << (r.reached ? 1 : 0) << ',' << r.replans << '\n';
    }
    return out.str();
}

std::string summary_csv(const ExperimentLog& log, int window) {
    if (window < 1) throw std::invalid_argument("summary: window must be positive");
    int max_run = -1;
    for (const auto& r : log.results) max_run = std::max(max_run, r.run);

    std::vector<std::string> planners;
    for (const auto& r : log.results)
        if (std::find(planners.begin(), planners.end(), r.planner) == planners.end())
            planners.push_back(r.planner);

    std::ostringstream out;
    out << "planner,window_end,mean_normalized\n";
    for (const auto& planner : planners) {
        for (int end = window; end <= max_run + 1; end += window) {
            double sum = 0.0;
            int n = 0;
            for (const auto& r : log.results) {
                if (r.planner != planner || !r.normalized_valid) continue;
                if (r.run >= end - window && r.run < end) {
                    sum += r.normalized;
                    ++n;
                }
            }
            out << planner << ',' << end << ',' << (n ? format_double(sum / n) : "na") << '\n';
        }
    }
    return out.str();
}

std::string rms_csv(const PredictionTable& table) {
    std::ostringstream out;
    out << "model,train_size,rms\n";
    for (const auto& row : table.rows)
        out << row.model << ',' << row.train_size << ',' << format_double(row.rms) << '\n';
    return out.str();
}

}  // namespace travnav
