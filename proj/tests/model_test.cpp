#include <doctest.h>

#include <stdexcept>

#include <algorithm>
#include <cmath>

#include "support/builders.hpp"
#include "support/oracles.hpp"
#include "travnav/model.hpp"
#include "travnav/rng.hpp"

using namespace travnav;

namespace {

ObservationSet obs_of(std::initializer_list<std::pair<EdgeId, bool>> items) {
    ObservationSet obs;
    for (const auto& [e, s] : items) obs.set(e, s);
    return obs;
}

// random stream of full configurations for a small edge set
std::vector<ObservationSet> random_full_stream(Rng& rng, int edges, int length) {
    std::vector<ObservationSet> stream;
    for (int t = 0; t < length; ++t) {
        ObservationSet obs(t);
        for (int e = 0; e < edges; ++e) obs.set(e, rng.bernoulli(0.5));
        stream.push_back(std::move(obs));
    }
    return stream;
}

BpSettings exact_settings() {
    BpSettings s;
    s.damping = 0.0;
    s.tolerance = 1e-12;
    s.max_iterations = 1000;
    return s;
}

}  // namespace

TEST_CASE("update touches only co-observed cells") {
    FactorGraphModel model(4);
    const double prior_pair = model.counts().pair(0, 2, 1, 1);
    model.update(obs_of({{0, true}, {1, true}}));

    CHECK(model.counts().unary(0, 1) == 2.0);  // alpha 1 + one observation
    CHECK(model.counts().unary(1, 1) == 2.0);
    CHECK(model.counts().unary(2, 1) == 1.0);
    CHECK(model.counts().pair(0, 1, 1, 1) == 1.25);  // alpha 0.25 + 1
    CHECK(model.counts().pair(0, 2, 1, 1) == prior_pair);
    CHECK(model.counts().pair(1, 3, 1, 1) == prior_pair);
}

TEST_CASE("empty observation leaves the model unchanged") {
    FactorGraphModel model(3);
    const CountStore before = model.counts();
    model.update(ObservationSet{});
    CHECK(model.counts() == before);
}

TEST_CASE("laplace-smoothed marginal from mixed observations") {
    FactorGraphModel model(2);
    for (int i = 0; i < 3; ++i) model.update(obs_of({{0, true}}));
    model.update(obs_of({{0, false}}));
    CHECK(model.edge_prob(0) == doctest::Approx(4.0 / 6.0).epsilon(1e-12));
}

TEST_CASE("fresh model: independence factors and half marginals") {
    FactorGraphModel model(5);
    const auto graph = model.build_graph(ObservationSet{});
    CHECK(static_cast<int>(graph.pairs().size()) == 5 * 4 / 2);
    for (const auto& f : graph.pairs())
        for (double cell : f.table) CHECK(cell == doctest::Approx(1.0).epsilon(1e-12));
    for (int e = 0; e < 5; ++e) CHECK(model.edge_prob(e) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("13 edges store 78 pair factors and 13 unaries") {
    FactorGraphModel model(13);
    const auto graph = model.build_graph(ObservationSet{});
    CHECK(graph.var_count() == 13);
    CHECK(graph.pairs().size() == 78);
}

TEST_CASE("perfectly co-observed edges approach the correlated factor") {
    FactorGraphModel model(2);
    for (int i = 0; i < 200; ++i)
        model.update(obs_of({{0, i % 2 == 0}, {1, i % 2 == 0}}));
    const auto graph = model.build_graph(ObservationSet{});
    const auto& psi = graph.pairs().front().table;
    CHECK(psi[3] == doctest::Approx(2.0).epsilon(0.02));   // (1,1)
    CHECK(psi[0] == doctest::Approx(2.0).epsilon(0.02));   // (0,0)
    CHECK(psi[1] <= 0.02);                                 // (0,1)
    CHECK(psi[2] <= 0.02);
}

TEST_CASE("predict clamps observed edges exactly") {
    FactorGraphModel model(4);
    Rng rng(5);
    for (int t = 0; t < 30; ++t) {
        ObservationSet obs(t);
        for (int e = 0; e < 4; ++e) obs.set(e, rng.bernoulli(0.6));
        model.update(obs);
    }
    ObservationSet all;
    for (int e = 0; e < 4; ++e) all.set(e, e % 2 == 0);
    const auto belief = model.predict(all);
    for (int e = 0; e < 4; ++e) {
        CHECK(belief.observed[static_cast<size_t>(e)] == 1);
        CHECK(belief.marginal[static_cast<size_t>(e)] == (e % 2 == 0 ? 1.0 : 0.0));
    }
}

TEST_CASE("fresh model with no observations predicts the symmetric prior") {
    FactorGraphModel model(6);
    const auto belief = model.predict(ObservationSet{});
    for (double m : belief.marginal) CHECK(m == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(belief.bp_converged);
}

TEST_CASE("correlation propagates through prediction") {
    // three edges, perfectly correlated training, observe one blocked
    FactorGraphModel model(3, {}, exact_settings());
    for (int i = 0; i < 100; ++i) {
        const bool s = i % 2 == 0;
        model.update(obs_of({{0, s}, {1, s}, {2, s}}));
    }
    const auto belief = model.predict(obs_of({{0, false}}));
    CHECK(belief.marginal[2] < 0.2);

    // oracle: exact conditioning of the smoothed empirical joint
    std::vector<double> table(8, 0.0);
    const double alpha = 0.25 * std::pow(2.0, 2 - 3);
    for (auto& c : table) c = alpha;
    table[0b000] += 50.0;
    table[0b111] += 50.0;
    const auto exact = oracle::table_conditional(table, 3, {0, -1, -1});
    CHECK(exact[2] < 0.2);
}

TEST_CASE("incremental updates equal shuffled batches") {
    Rng rng(17);
    for (int trial = 0; trial < 20; ++trial) {
        const int edges = 2 + static_cast<int>(rng.below(7));
        auto stream = random_full_stream(rng, edges, 30);

        CountStore sequential(edges, 1.0, 0.25);
        for (const auto& obs : stream) sequential.add(obs);

        std::vector<size_t> order(stream.size());
        for (size_t i = 0; i < order.size(); ++i) order[i] = i;
        for (size_t i = order.size() - 1; i > 0; --i)
            std::swap(order[i], order[rng.below(i + 1)]);

        CountStore shuffled(edges, 1.0, 0.25);
        for (size_t i : order) shuffled.add(stream[i]);
        CHECK(sequential == shuffled);
    }
}

TEST_CASE("predict is a pure function of revision and observations") {
    FactorGraphModel model(4);
    Rng rng(23);
    for (int t = 0; t < 10; ++t) {
        ObservationSet obs;
        for (int e = 0; e < 4; ++e)
            if (rng.bernoulli(0.7)) obs.set(e, rng.bernoulli(0.5));
        model.update(obs);
    }
    const auto obs = obs_of({{1, true}});
    const auto a = model.predict(obs);
    const auto b = model.predict(obs);
    CHECK(a.marginal == b.marginal);
    CHECK(a.bp_iterations == b.bp_iterations);
}

TEST_CASE("chain-restricted prediction matches exact conditioning of the chain product") {
    Rng rng(29);
    for (int trial = 0; trial < 10; ++trial) {
        const int edges = 3 + static_cast<int>(rng.below(5));
        FactorGraphModel model(edges, {}, exact_settings());
        for (const auto& obs : random_full_stream(rng, edges, 40)) model.update(obs);

        const auto keep_chain = [](EdgeId i, EdgeId j) { return std::abs(i - j) == 1; };
        ObservationSet obs;
        obs.set(0, rng.bernoulli(0.5));

        auto graph = model.build_graph(obs, keep_chain);
        const auto bp = run_bp(graph, exact_settings());
        const auto exact = oracle::enumerate_marginals(graph);
        for (int e = 0; e < edges; ++e)
            CHECK(std::abs(bp.marginals[static_cast<size_t>(e)][1] -
                           exact[static_cast<size_t>(e)][1]) <= 1e-6);
    }
}

TEST_CASE("factor product identity on full configurations") {
    Rng rng(31);
    const int edges = 5;
    FactorGraphModel model(edges);
    for (const auto& obs : random_full_stream(rng, edges, 25)) model.update(obs);

    const auto graph = model.build_graph(ObservationSet{});
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<uint8_t> bits(edges);
        for (auto& b : bits) b = rng.bernoulli(0.5) ? 1 : 0;
        double direct = 0.0;
        for (int v = 0; v < edges; ++v)
            direct += std::log(graph.unary(v)[bits[static_cast<size_t>(v)]]);
        for (const auto& f : graph.pairs())
            direct += std::log(f.table[static_cast<size_t>(bits[static_cast<size_t>(f.a)] * 2 +
                                                           bits[static_cast<size_t>(f.b)])]);
        CHECK(model.log_factor_product(bits) == doctest::Approx(direct).epsilon(1e-9));
    }
}

TEST_CASE("pairwise mutual information") {
    SUBCASE("fresh model has zero MI everywhere") {
        FactorGraphModel model(4);
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j)
                if (i != j) CHECK(model.pairwise_mi(i, j) == 0.0);
    }
    SUBCASE("perfect correlation approaches one bit") {
        FactorGraphModel model(2);
        for (int i = 0; i < 2000; ++i)
            model.update(obs_of({{0, i % 2 == 0}, {1, i % 2 == 0}}));
        CHECK(model.pairwise_mi(0, 1) == doctest::Approx(1.0).epsilon(0.01));
        CHECK(model.pairwise_mi(0, 1) == model.pairwise_mi(1, 0));
    }
    SUBCASE("random tables satisfy the MI bounds") {
        Rng rng(37);
        for (int trial = 0; trial < 50; ++trial) {
            FactorGraphModel model(3);
            const int n = 1 + static_cast<int>(rng.below(60));
            for (int i = 0; i < n; ++i) {
                ObservationSet obs;
                obs.set(0, rng.bernoulli(0.3));
                obs.set(1, rng.bernoulli(0.8));
                if (rng.bernoulli(0.5)) obs.set(2, rng.bernoulli(0.5));
                model.update(obs);
            }
            const double mi = model.pairwise_mi(0, 1);
            const auto joint = model.pair_joint(0, 1);
            const double p1 = joint[2] + joint[3];
            const double q1 = joint[1] + joint[3];
            auto entropy = [](double p) {
                if (p <= 0.0 || p >= 1.0) return 0.0;
                return -p * std::log2(p) - (1 - p) * std::log2(1 - p);
            };
            CHECK(mi >= 0.0);
            CHECK(mi <= std::min(entropy(p1), entropy(q1)) + 1e-12);
        }
    }
}

TEST_CASE("independent model ignores cross-edge evidence") {
    IndependentModel model(3);
    for (int i = 0; i < 50; ++i) model.update(obs_of({{0, true}, {1, false}}));
    const auto no_obs = model.predict(ObservationSet{});
    const auto with_obs = model.predict(obs_of({{0, false}}));
    CHECK(with_obs.marginal[1] == no_obs.marginal[1]);
    CHECK(with_obs.marginal[2] == no_obs.marginal[2]);
    CHECK(with_obs.marginal[0] == 0.0);
}

TEST_CASE("independent and factor-graph models agree when pairs stay at the prior") {
    // single-edge observations never move the pairwise tables
    IndependentModel ind(4);
    FactorGraphModel fg(4, {}, exact_settings());
    Rng rng(41);
    for (int t = 0; t < 60; ++t) {
        ObservationSet obs;
        const EdgeId e = static_cast<EdgeId>(rng.below(4));
        obs.set(e, rng.bernoulli(0.3));
        ind.update(obs);
        fg.update(obs);
    }
    const auto a = ind.predict(ObservationSet{});
    const auto b = fg.predict(ObservationSet{});
    for (int e = 0; e < 4; ++e)
        CHECK(a.marginal[static_cast<size_t>(e)] ==
              doctest::Approx(b.marginal[static_cast<size_t>(e)]).epsilon(1e-6));
}

TEST_CASE("full joint model") {
    SUBCASE("rejects maps beyond the enumeration bound") {
        CHECK_THROWS_AS(FullJointModel(21), std::invalid_argument);
        CHECK_NOTHROW(FullJointModel(13));
        CHECK(FullJointModel(13).table().size() == 8192);
    }
    SUBCASE("requires full observations for training") {
        FullJointModel model(3);
        CHECK_THROWS_AS(model.update(obs_of({{0, true}})), std::invalid_argument);
    }
    SUBCASE("full observation conditions to a point mass") {
        FullJointModel model(3);
        ObservationSet obs = obs_of({{0, true}, {1, false}, {2, true}});
        model.update(obs);
        const auto belief = model.predict(obs);
        CHECK(belief.marginal[0] == 1.0);
        CHECK(belief.marginal[1] == 0.0);
        CHECK(belief.marginal[2] == 1.0);
    }
    SUBCASE("conditionals equal the brute-force empirical conditional") {
        Rng rng(43);
        for (int trial = 0; trial < 10; ++trial) {
            const int edges = 2 + static_cast<int>(rng.below(7));
            FullJointModel model(edges);
            std::vector<double> table(static_cast<size_t>(1) << edges, model.alpha());
            for (int t = 0; t < 50; ++t) {
                ObservationSet obs;
                size_t index = 0;
                for (int e = 0; e < edges; ++e) {
                    const bool s = rng.bernoulli(0.5);
                    obs.set(e, s);
                    if (s) index |= static_cast<size_t>(1) << e;
                }
                model.update(obs);
                table[index] += 1.0;
            }
            std::vector<int> partial(static_cast<size_t>(edges), -1);
            ObservationSet obs;
            for (int e = 0; e < edges; ++e)
                if (rng.bernoulli(0.4)) {
                    const bool s = rng.bernoulli(0.5);
                    partial[static_cast<size_t>(e)] = s ? 1 : 0;
                    obs.set(e, s);
                }
            const auto belief = model.predict(obs);
            const auto exact = oracle::table_conditional(table, edges, partial);
            for (int e = 0; e < edges; ++e)
                CHECK(belief.marginal[static_cast<size_t>(e)] ==
                      doctest::Approx(exact[static_cast<size_t>(e)]).epsilon(1e-9));
        }
    }
}

TEST_CASE("count store persistence round-trips exactly") {
    Rng rng(47);
    CountStore counts(6, 1.0, 0.25);
    for (const auto& obs : random_full_stream(rng, 6, 40)) counts.add(obs);

    const std::string text = counts.serialize();
    const CountStore back = CountStore::deserialize(text);
    CHECK(back == counts);
    CHECK(back.serialize() == text);
    CHECK(back.revision() == counts.revision());

    FactorGraphModel model(6);
    model.restore_counts(back);
    CHECK(model.counts() == counts);
    CHECK_THROWS_AS(CountStore::deserialize("garbage"), std::invalid_argument);
}

TEST_CASE("observation set semantics") {
    ObservationSet obs;
    obs.set(3, true);
    CHECK_NOTHROW(obs.set(3, true));
    CHECK_THROWS_AS(obs.set(3, false), std::logic_error);
    CHECK_THROWS_AS(obs.set(-1, true), std::invalid_argument);
    CHECK(obs.contains(3));
    CHECK_FALSE(obs.contains(0));
    CHECK(obs.get(3) == true);
    CHECK_FALSE(obs.get(0).has_value());
    CHECK(obs.size() == 1);
}
