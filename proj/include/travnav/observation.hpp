#pragma once

#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "travnav/env.hpp"
#include "travnav/topology.hpp"

namespace travnav {

// Partial edge-state assignment accumulated within one run. Re-recording an
// edge with the same state is a no-op; a conflicting state is a logic error
// because the world is fixed for the duration of a run.
class ObservationSet {
  public:
    ObservationSet() = default;
    explicit ObservationSet(int run) : run_(run) {}

    void set(EdgeId e, bool free) {
        if (e < 0) throw std::invalid_argument("observation: invalid edge id " + std::to_string(e));
        auto [it, inserted] = obs_.try_emplace(e, free);
        if (!inserted && it->second != free)
            throw std::logic_error("observation: conflicting state for edge " + std::to_string(e));
    }

    bool contains(EdgeId e) const { return obs_.count(e) > 0; }

    std::optional<bool> get(EdgeId e) const {
        auto it = obs_.find(e);
        if (it == obs_.end()) return std::nullopt;
        return it->second;
    }

    int size() const { return static_cast<int>(obs_.size()); }
    bool empty() const { return obs_.empty(); }
    int run() const { return run_; }

    auto begin() const { return obs_.begin(); }
    auto end() const { return obs_.end(); }

    static ObservationSet full(const EnvConfiguration& cfg) {
        ObservationSet obs(cfg.run);
        for (int e = 0; e < cfg.edge_count(); ++e) obs.set(e, cfg.free(e));
        return obs;
    }

  private:
    std::map<EdgeId, bool> obs_;  // ordered for deterministic iteration
    int run_ = -1;
};

}  // namespace travnav
