#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "travnav/bp.hpp"
#include "travnav/factor_graph.hpp"
#include "travnav/observation.hpp"

namespace travnav {

// Per-edge traversability belief conditioned on the observations that
// produced it. Observed edges carry an exact 0/1 marginal.
struct BeliefState {
    std::vector<double> marginal;  // p(edge free)
    std::vector<uint8_t> observed;
    bool bp_converged = true;
    int bp_iterations = 0;
    double bp_max_delta = 0.0;

    int edge_count() const { return static_cast<int>(marginal.size()); }
};

struct ModelParams {
    double unary_alpha = 1.0;   // prior pseudocount per unary cell
    double pair_alpha = 0.25;   // per pairwise cell; prior marginals then match the unary prior
    double mi_threshold = 0.0;  // drop pair factors with MI below this (0 keeps the dense graph)
};

// Laplace-smoothed occurrence counters for unary and pairwise edge states.
// Pairwise cells advance only when both edges appear in the same update, so
// partial observations never touch unrelated cells.
class CountStore {
  public:
    CountStore(int edge_count, double unary_alpha, double pair_alpha);

    void add(const ObservationSet& obs);

    int edge_count() const { return edges_; }
    double unary(EdgeId e, int s) const;
    double pair(EdgeId i, EdgeId j, int si, int sj) const;
    double unary_alpha() const { return unary_alpha_; }
    double pair_alpha() const { return pair_alpha_; }
    uint64_t revision() const { return revision_; }

    std::string serialize() const;
    static CountStore deserialize(const std::string& text);
    bool operator==(const CountStore& other) const;

  private:
    size_t pair_index(EdgeId i, EdgeId j) const;

    int edges_ = 0;
    double unary_alpha_ = 1.0;
    double pair_alpha_ = 0.25;
    uint64_t revision_ = 0;
    std::vector<std::array<double, 2>> unary_;
    std::vector<std::array<double, 4>> pair_;  // upper triangle, [si*2+sj]
};

// Common interface of the traversability models compared in experiments.
class TravModel {
  public:
    virtual ~TravModel() = default;
    virtual void update(const ObservationSet& obs) = 0;
    virtual BeliefState predict(const ObservationSet& obs) const = 0;
    virtual std::string name() const = 0;
};

// Pairwise factor-graph model: unary factors are the smoothed edge
// marginals, pairwise factors the joint-over-product ratios, one factor per
// edge pair. Prediction clamps the observed edges and runs loopy BP.
class FactorGraphModel : public TravModel {
  public:
    explicit FactorGraphModel(int edge_count, ModelParams params = {}, BpSettings bp = {});

    void update(const ObservationSet& obs) override;
    BeliefState predict(const ObservationSet& obs) const override;
    std::string name() const override { return "factor_graph"; }

    double edge_prob(EdgeId e) const;                          // p(e = free)
    std::array<double, 4> pair_joint(EdgeId i, EdgeId j) const;  // normalized
    double pairwise_mi(EdgeId i, EdgeId j) const;              // bits, >= 0

    // phi/psi tables assembled into an inference graph; keep_pair lets tests
    // restrict the pairwise structure (e.g. to a chain).
    FactorGraph build_graph(const ObservationSet& obs) const;
    FactorGraph build_graph(const ObservationSet& obs,
                            const std::function<bool(EdgeId, EdgeId)>& keep_pair) const;

    // log of the unnormalized factor product for a full configuration
    double log_factor_product(const std::vector<uint8_t>& bits) const;

    const CountStore& counts() const { return counts_; }
    void restore_counts(CountStore counts);
    const BpSettings& bp_settings() const { return bp_; }
    const ModelParams& params() const { return params_; }
    uint64_t revision() const { return counts_.revision(); }

  private:
    void rebuild();

    CountStore counts_;
    ModelParams params_;
    BpSettings bp_;
    std::vector<double> prob_;                       // unary p(free)
    std::vector<std::array<double, 4>> joint_;       // pairwise joints, upper triangle
    std::vector<double> mi_;                         // pairwise MI (bits), upper triangle
    size_t pair_index(EdgeId i, EdgeId j) const;
};

// Beta-Bernoulli per edge; observations of other edges never move a
// prediction.
class IndependentModel : public TravModel {
  public:
    explicit IndependentModel(int edge_count, double alpha = 1.0);

    void update(const ObservationSet& obs) override;
    BeliefState predict(const ObservationSet& obs) const override;
    std::string name() const override { return "independent"; }

    double edge_prob(EdgeId e) const;

  private:
    std::vector<std::array<double, 2>> counts_;
};

// Smoothed count per full configuration; exact conditioning by enumeration.
// The exactness oracle for small maps.
class FullJointModel : public TravModel {
  public:
    static constexpr int kMaxEdges = 20;

    // alpha < 0 picks the default coupling pair_alpha * 2^(2 - |E|), which
    // marginalizes onto the same pairwise prior as the factor-graph model.
    explicit FullJointModel(int edge_count, double alpha = -1.0);

    // requires a full configuration observation
    void update(const ObservationSet& obs) override;
    BeliefState predict(const ObservationSet& obs) const override;
    std::string name() const override { return "full_joint"; }

    const std::vector<double>& table() const { return counts_; }
    double alpha() const { return alpha_; }

  private:
    int edges_ = 0;
    double alpha_ = 0.0;
    double total_ = 0.0;
    std::vector<double> counts_;  // indexed by bit pattern, bit e = edge e state
};

}  // namespace travnav
