#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <unordered_set>
#include <vector>

namespace travnav {

// One pairwise factor over two distinct binary variables; table indexed by
// state_a * 2 + state_b. All entries must stay positive.
struct PairFactor {
    int a = 0;
    int b = 0;
    std::array<double, 4> table{1.0, 1.0, 1.0, 1.0};
};

// Factor graph over binary variables with one optional unary factor per
// variable and at most one pairwise factor per variable pair. Observed
// variables are clamped; a clamped variable emits an indicator message and
// its unary factor is ignored.
class FactorGraph {
  public:
    explicit FactorGraph(int var_count);

    int var_count() const { return static_cast<int>(unary_.size()); }

    void set_unary(int v, double p0, double p1);
    void add_pair(int a, int b, const std::array<double, 4>& table);

    void clamp(int v, int value);
    // -1 when unclamped
    int clamped_value(int v) const { return clamp_[static_cast<size_t>(v)]; }

    const std::array<double, 2>& unary(int v) const { return unary_[static_cast<size_t>(v)]; }
    const std::vector<PairFactor>& pairs() const { return pairs_; }

    // troubleshooting dump in the map-document style
    std::string dump_json() const;

  private:
    std::vector<std::array<double, 2>> unary_;
    std::vector<int8_t> clamp_;
    std::vector<PairFactor> pairs_;
    std::unordered_set<uint64_t> pair_keys_;
};

}  // namespace travnav
