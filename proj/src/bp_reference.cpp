#include <algorithm>
#include <cmath>
#include <vector>

#include "travnav/bp.hpp"

namespace travnav {

// Textbook bipartite sum-product: explicit variable-to-factor and
// factor-to-variable messages, plain serial sweeps. Slower and simpler than
// the production kernel on purpose; tests compare the two.
BpResult run_bp_reference(const FactorGraph& graph, const BpSettings& settings) {
    const int n = graph.var_count();
    const auto& pairs = graph.pairs();
    const size_t nf = pairs.size();

    auto local = [&](int v) -> std::array<double, 2> {
        const int c = graph.clamped_value(v);
        if (c == 0) return {1.0, 0.0};
        if (c == 1) return {0.0, 1.0};
        return graph.unary(v);
    };

    // [factor][side][state], side 0 touches pairs[f].a, side 1 touches .b
    std::vector<std::array<std::array<double, 2>, 2>> to_factor(nf, {{{0.5, 0.5}, {0.5, 0.5}}});
    std::vector<std::array<std::array<double, 2>, 2>> to_var(nf, {{{0.5, 0.5}, {0.5, 0.5}}});

    std::vector<std::vector<std::pair<int, int>>> factors_at(static_cast<size_t>(n));
    for (size_t f = 0; f < nf; ++f) {
        factors_at[static_cast<size_t>(pairs[f].a)].push_back({static_cast<int>(f), 0});
        factors_at[static_cast<size_t>(pairs[f].b)].push_back({static_cast<int>(f), 1});
    }

    bool converged = false;
    int iterations = 0;
    double delta = 0.0;

    for (int iter = 1; iter <= settings.max_iterations; ++iter) {
        // variable -> factor
        for (size_t f = 0; f < nf; ++f) {
            for (int side = 0; side < 2; ++side) {
                const int v = side == 0 ? pairs[f].a : pairs[f].b;
                std::array<double, 2> q = local(v);
                for (auto [g, gside] : factors_at[static_cast<size_t>(v)]) {
                    if (static_cast<size_t>(g) == f && gside == side) continue;
                    q[0] *= to_var[static_cast<size_t>(g)][static_cast<size_t>(gside)][0];
                    q[1] *= to_var[static_cast<size_t>(g)][static_cast<size_t>(gside)][1];
                }
                const double sum = q[0] + q[1];
                if (sum > 0.0) {
                    q[0] /= sum;
                    q[1] /= sum;
                } else {
                    q = {0.5, 0.5};
                }
                to_factor[f][static_cast<size_t>(side)] = q;
            }
        }
        // factor -> variable, damped
        delta = 0.0;
        for (size_t f = 0; f < nf; ++f) {
            for (int side = 0; side < 2; ++side) {
                std::array<double, 2> r{};
                for (int s_out = 0; s_out < 2; ++s_out) {
                    double acc = 0.0;
                    for (int s_in = 0; s_in < 2; ++s_in) {
                        const double psi = side == 0 ? pairs[f].table[static_cast<size_t>(s_out * 2 + s_in)]
                                                     : pairs[f].table[static_cast<size_t>(s_in * 2 + s_out)];
                        acc += psi * to_factor[f][static_cast<size_t>(1 - side)][static_cast<size_t>(s_in)];
                    }
                    r[static_cast<size_t>(s_out)] = acc;
                }
                r[0] = std::max(r[0], 1e-12);
                r[1] = std::max(r[1], 1e-12);
                const double sum = r[0] + r[1];
                r[0] /= sum;
                r[1] /= sum;
                auto& old = to_var[f][static_cast<size_t>(side)];
                const std::array<double, 2> prev = old;
                old[0] = (1.0 - settings.damping) * r[0] + settings.damping * prev[0];
                old[1] = (1.0 - settings.damping) * r[1] + settings.damping * prev[1];
                delta = std::max(delta, std::max(std::abs(old[0] - prev[0]), std::abs(old[1] - prev[1])));
            }
        }
        iterations = iter;
        if (delta < settings.tolerance) {
            converged = true;
            break;
        }
    }

    BpResult res;
    res.converged = converged;
    res.iterations = iterations;
    res.max_delta = delta;
    res.marginals.resize(static_cast<size_t>(n));
    for (int v = 0; v < n; ++v) {
        const int c = graph.clamped_value(v);
        if (c != -1) {
            res.marginals[static_cast<size_t>(v)] = {c == 0 ? 1.0 : 0.0, c == 1 ? 1.0 : 0.0};
            continue;
        }
        std::array<double, 2> b = local(v);
        for (auto [g, gside] : factors_at[static_cast<size_t>(v)]) {
            b[0] *= to_var[static_cast<size_t>(g)][static_cast<size_t>(gside)][0];
            b[1] *= to_var[static_cast<size_t>(g)][static_cast<size_t>(gside)][1];
        }
        const double sum = b[0] + b[1];
        res.marginals[static_cast<size_t>(v)] = {b[0] / sum, b[1] / sum};
    }
    return res;
}

}  // namespace travnav
