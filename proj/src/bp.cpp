#include "travnav/bp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "travnav/rng.hpp"

namespace travnav {

namespace {

constexpr double kMsgFloor = 1e-12;   // per-entry floor against underflow
constexpr double kRescale = 0x1p332;  // exact power-of-two product rescale
constexpr double kRescaleAt = 0x1p-332;

using Msg = std::array<double, 2>;

// Directed messages over pair factors: slot 2f is a->b of factor f, slot
// 2f+1 is b->a. The unary factor is folded into the sending variable's
// local potential; clamped variables send indicator-shaped messages.
struct Wiring {
    int var_count = 0;
    struct Incidence {
        int in_slot;   // message arriving at this variable through the factor
        int out_slot;  // message leaving this variable through the factor
        int factor;
        bool is_a;  // variable sits on side a of the factor
    };
    std::vector<std::vector<Incidence>> at_var;
    std::vector<int> sender;  // slot -> sending variable
};

Wiring make_wiring(const FactorGraph& graph) {
    Wiring w;
    w.var_count = graph.var_count();
    w.at_var.assign(static_cast<size_t>(w.var_count), {});
    const auto& pairs = graph.pairs();
    w.sender.resize(pairs.size() * 2);
    for (size_t f = 0; f < pairs.size(); ++f) {
        const auto& pf = pairs[f];
        const int slot_ab = static_cast<int>(2 * f);
        const int slot_ba = static_cast<int>(2 * f + 1);
        w.at_var[static_cast<size_t>(pf.a)].push_back({slot_ba, slot_ab, static_cast<int>(f), true});
        w.at_var[static_cast<size_t>(pf.b)].push_back({slot_ab, slot_ba, static_cast<int>(f), false});
        w.sender[static_cast<size_t>(slot_ab)] = pf.a;
        w.sender[static_cast<size_t>(slot_ba)] = pf.b;
    }
    return w;
}

inline Msg local_potential(const FactorGraph& graph, int v) {
    const int c = graph.clamped_value(v);
    if (c == 0) return {1.0, 0.0};
    if (c == 1) return {0.0, 1.0};
    return graph.unary(v);
}

// product of the local potential and all incoming messages except skip_slot
inline Msg gather(const FactorGraph& graph, const Wiring& w, const std::vector<Msg>& msgs, int v,
                  int skip_slot) {
    Msg t = local_potential(graph, v);
    for (const auto& inc : w.at_var[static_cast<size_t>(v)]) {
        if (inc.in_slot == skip_slot) continue;
        t[0] *= msgs[static_cast<size_t>(inc.in_slot)][0];
        t[1] *= msgs[static_cast<size_t>(inc.in_slot)][1];
        if (t[0] + t[1] < kRescaleAt) {
            t[0] *= kRescale;
            t[1] *= kRescale;
        }
    }
    return t;
}

inline Msg compose(const FactorGraph& graph, const Wiring& w, const std::vector<Msg>& msgs, int slot,
                   bool max_product) {
    const int f = slot / 2;
    const auto& pf = graph.pairs()[static_cast<size_t>(f)];
    const int v = w.sender[static_cast<size_t>(slot)];
    const bool from_a = (v == pf.a);
    const Msg t = gather(graph, w, msgs, v, slot ^ 1);

    Msg out{};
    for (int sw = 0; sw < 2; ++sw) {
        double acc = 0.0;
        for (int sv = 0; sv < 2; ++sv) {
            const double psi = from_a ? pf.table[static_cast<size_t>(sv * 2 + sw)]
                                      : pf.table[static_cast<size_t>(sw * 2 + sv)];
            const double term = psi * t[static_cast<size_t>(sv)];
            acc = max_product ? std::max(acc, term) : acc + term;
        }
        out[static_cast<size_t>(sw)] = acc;
    }
    out[0] = std::max(out[0], kMsgFloor);
    out[1] = std::max(out[1], kMsgFloor);
    const double sum = out[0] + out[1];
    out[0] /= sum;
    out[1] /= sum;
    return out;
}

BpResult finish(const FactorGraph& graph, const Wiring& w, const std::vector<Msg>& msgs,
                bool converged, int iterations, double max_delta) {
    BpResult res;
    res.converged = converged;
    res.iterations = iterations;
    res.max_delta = max_delta;
    res.marginals.resize(static_cast<size_t>(w.var_count));
    for (int v = 0; v < w.var_count; ++v) {
        const int c = graph.clamped_value(v);
        if (c != -1) {
            res.marginals[static_cast<size_t>(v)] = {c == 0 ? 1.0 : 0.0, c == 1 ? 1.0 : 0.0};
            continue;
        }
        Msg b = gather(graph, w, msgs, v, -1);
        b[0] = std::max(b[0], kMsgFloor);
        b[1] = std::max(b[1], kMsgFloor);
        const double sum = b[0] + b[1];
        res.marginals[static_cast<size_t>(v)] = {b[0] / sum, b[1] / sum};
    }
    return res;
}

BpResult run_engine(const FactorGraph& graph, const BpSettings& settings, bool max_product) {
    if (settings.max_iterations < 1) throw std::invalid_argument("bp: max_iterations must be >= 1");
    if (!(settings.tolerance > 0.0)) throw std::invalid_argument("bp: tolerance must be positive");
    if (!(settings.damping >= 0.0 && settings.damping < 1.0))
        throw std::invalid_argument("bp: damping must be in [0, 1)");

    const Wiring w = make_wiring(graph);
    const int n_slots = static_cast<int>(graph.pairs().size()) * 2;
    std::vector<Msg> cur(static_cast<size_t>(n_slots), Msg{0.5, 0.5});
    std::vector<Msg> next(static_cast<size_t>(n_slots));

    const double lambda = settings.damping;
    bool converged = false;
    int iterations = 0;
    double delta = 0.0;

    Rng order_rng(mix_seed(settings.seed, 0x6270));
    std::vector<int> order(static_cast<size_t>(n_slots));
    for (int i = 0; i < n_slots; ++i) order[static_cast<size_t>(i)] = i;

    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        delta = 0.0;
        if (settings.schedule == BpSchedule::synchronous) {
#pragma omp parallel for schedule(static) reduction(max : delta)
            for (int s = 0; s < n_slots; ++s) {
                const Msg hat = compose(graph, w, cur, s, max_product);
                Msg& out = next[static_cast<size_t>(s)];
                const Msg& old = cur[static_cast<size_t>(s)];
                out[0] = (1.0 - lambda) * hat[0] + lambda * old[0];
                out[1] = (1.0 - lambda) * hat[1] + lambda * old[1];
                delta = std::max(delta, std::max(std::abs(out[0] - old[0]), std::abs(out[1] - old[1])));
            }
            cur.swap(next);
        } else {
            // fresh sweep order each iteration from the persistent stream
            for (int i = n_slots - 1; i > 0; --i)
                std::swap(order[static_cast<size_t>(i)], order[order_rng.below(static_cast<uint64_t>(i) + 1)]);
            for (int idx = 0; idx < n_slots; ++idx) {
                const int s = order[static_cast<size_t>(idx)];
                const Msg hat = compose(graph, w, cur, s, max_product);
                Msg& slot = cur[static_cast<size_t>(s)];
                const Msg old = slot;
                slot[0] = (1.0 - lambda) * hat[0] + lambda * old[0];
                slot[1] = (1.0 - lambda) * hat[1] + lambda * old[1];
                delta = std::max(delta, std::max(std::abs(slot[0] - old[0]), std::abs(slot[1] - old[1])));
            }
        }
        iterations = iter;
        if (delta < settings.tolerance) {
            converged = true;
            break;
        }
    }
    return finish(graph, w, cur, converged, iterations, delta);
}

}  // namespace

BpResult run_bp(const FactorGraph& graph, const BpSettings& settings) {
    return run_engine(graph, settings, false);
}

std::vector<int> map_configuration(const FactorGraph& graph, const BpSettings& settings) {
    const BpResult res = run_engine(graph, settings, true);
    std::vector<int> assignment(static_cast<size_t>(graph.var_count()));
    for (int v = 0; v < graph.var_count(); ++v) {
        const int c = graph.clamped_value(v);
        if (c != -1)
            assignment[static_cast<size_t>(v)] = c;
        else
            assignment[static_cast<size_t>(v)] =
                res.marginals[static_cast<size_t>(v)][1] >= res.marginals[static_cast<size_t>(v)][0] ? 1 : 0;
    }
    return assignment;
}

}  // namespace travnav
