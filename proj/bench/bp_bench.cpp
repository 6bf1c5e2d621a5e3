// Benchmark of the belief-propagation kernel: serial bipartite reference vs
// the production synchronous kernel at one thread and at all threads, on
// dense pairwise graphs of the sizes the experiments use. Also times the
// prediction throughput of a trained factor-graph model.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include <omp.h>

#include <CLI11.hpp>

#include "travnav/bp.hpp"
#include "travnav/model.hpp"
#include "travnav/rng.hpp"

using namespace travnav;

namespace {

FactorGraph dense_graph(Rng& rng, int n, double clamp_fraction) {
    FactorGraph graph(n);
    for (int v = 0; v < n; ++v) {
        const double p = 0.2 + 0.6 * rng.uniform();
        graph.set_unary(v, 1.0 - p, p);
    }
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j) {
            std::array<double, 4> t{};
            for (auto& cell : t) cell = 0.5 + 1.5 * rng.uniform();
            graph.add_pair(i, j, t);
        }
    for (int v = 0; v < n; ++v)
        if (rng.uniform() < clamp_fraction) graph.clamp(v, rng.bernoulli(0.5) ? 1 : 0);
    return graph;
}

template <typename Fn>
double time_ms(Fn&& fn, int repeats) {
    double best = 1e300;
    for (int r = 0; r < repeats; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const auto t1 = std::chrono::steady_clock::now();
        best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
    }
    return best;
}

double marginal_gap(const BpResult& a, const BpResult& b) {
    double d = 0.0;
    for (size_t i = 0; i < a.marginals.size(); ++i)
        d = std::max(d, std::abs(a.marginals[i][1] - b.marginals[i][1]));
    return d;
}

void bench_bp(const std::vector<int>& sizes, int repeats) {
    BpSettings settings;
    settings.tolerance = 1e-8;
    settings.max_iterations = 500;

    std::printf("%6s %10s %12s %12s %10s %12s\n", "vars", "factors", "ref_ms", "bp_1thr_ms",
                "bp_ms", "max_dmarg");
    for (int n : sizes) {
        Rng rng(mix_seed(1234, n));
        const FactorGraph graph = dense_graph(rng, n, 0.3);

        BpResult ref_result, one_result, par_result;
        const double ref = time_ms([&] { ref_result = run_bp_reference(graph, settings); }, repeats);

        const int max_threads = omp_get_max_threads();
        omp_set_num_threads(1);
        const double one = time_ms([&] { one_result = run_bp(graph, settings); }, repeats);
        omp_set_num_threads(max_threads);
        const double par = time_ms([&] { par_result = run_bp(graph, settings); }, repeats);

        std::printf("%6d %10zu %12.3f %12.3f %10.3f %12.2e\n", n, graph.pairs().size(), ref, one,
                    par, std::max(marginal_gap(par_result, ref_result),
                                  marginal_gap(par_result, one_result)));
    }
}

void bench_predict(int edges, int predictions, int repeats) {
    Rng rng(777);
    FactorGraphModel model(edges);
    for (int t = 0; t < 200; ++t) {
        ObservationSet obs(t);
        for (int e = 0; e < edges; ++e) obs.set(e, rng.bernoulli(0.5));
        model.update(obs);
    }

    std::vector<ObservationSet> queries;
    for (int i = 0; i < predictions; ++i) {
        ObservationSet obs(i);
        for (int e = 0; e < edges; ++e)
            if (rng.bernoulli(0.5)) obs.set(e, rng.bernoulli(0.5));
        queries.push_back(std::move(obs));
    }

    auto run_all = [&](bool parallel) {
        volatile double sink = 0.0;
        if (parallel) {
#pragma omp parallel for schedule(dynamic, 8)
            for (int i = 0; i < predictions; ++i)
                sink = sink + model.predict(queries[static_cast<size_t>(i)]).marginal[0];
        } else {
            for (int i = 0; i < predictions; ++i)
                sink = sink + model.predict(queries[static_cast<size_t>(i)]).marginal[0];
        }
    };

    const double serial = time_ms([&] { run_all(false); }, repeats);
    const double parallel = time_ms([&] { run_all(true); }, repeats);
    std::printf("\npredict throughput (%d edges, %d partial queries)\n", edges, predictions);
    std::printf("  serial:   %8.1f ms  (%.0f /s)\n", serial, predictions / serial * 1000.0);
    std::printf("  parallel: %8.1f ms  (%.0f /s, %d threads)\n", parallel,
                predictions / parallel * 1000.0, omp_get_max_threads());
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> sizes{13, 18, 30, 55, 96};
    int repeats = 5;
    int predictions = 400;

    CLI::App app{"belief propagation benchmark"};
    app.add_option("--sizes", sizes, "graph sizes to time")->delimiter(',');
    app.add_option("--repeats", repeats, "repetitions per measurement");
    app.add_option("--predictions", predictions, "queries for the predict benchmark");
    CLI11_PARSE(app, argc, argv);

    bench_bp(sizes, repeats);
    bench_predict(18, predictions, std::max(repeats / 2, 1));
    return 0;
}
