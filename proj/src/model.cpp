#include "travnav/model.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace travnav {

namespace {

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

double parse_double(const std::string& s) {
    double v = 0.0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || p != s.data() + s.size())
        throw std::invalid_argument("counts: bad number '" + s + "'");
    return v;
}

}  // namespace

CountStore::CountStore(int edge_count, double unary_alpha, double pair_alpha)
    : edges_(edge_count), unary_alpha_(unary_alpha), pair_alpha_(pair_alpha) {
    if (edge_count < 1) throw std::invalid_argument("counts: need at least one edge");
    if (!(unary_alpha > 0.0) || !(pair_alpha > 0.0))
        throw std::invalid_argument("counts: pseudocounts must be positive");
    unary_.assign(static_cast<size_t>(edges_), {unary_alpha, unary_alpha});
    pair_.assign(static_cast<size_t>(edges_) * (edges_ - 1) / 2,
                 {pair_alpha, pair_alpha, pair_alpha, pair_alpha});
}

size_t CountStore::pair_index(EdgeId i, EdgeId j) const {
    if (i > j) std::swap(i, j);
    return static_cast<size_t>(i) * (2 * edges_ - i - 1) / 2 + static_cast<size_t>(j - i - 1);
}

void CountStore::add(const ObservationSet& obs) {
    for (auto it = obs.begin(); it != obs.end(); ++it) {
        const EdgeId e = it->first;
        if (e >= edges_) throw std::invalid_argument("counts: edge id " + std::to_string(e) + " out of range");
        unary_[static_cast<size_t>(e)][it->second ? 1 : 0] += 1.0;
        for (auto jt = std::next(it); jt != obs.end(); ++jt) {
            const int si = it->second ? 1 : 0;
            const int sj = jt->second ? 1 : 0;
            pair_[pair_index(e, jt->first)][static_cast<size_t>(si * 2 + sj)] += 1.0;
        }
    }
    ++revision_;
}

double CountStore::unary(EdgeId e, int s) const { return unary_[static_cast<size_t>(e)][static_cast<size_t>(s)]; }

double CountStore::pair(EdgeId i, EdgeId j, int si, int sj) const {
    if (i == j) throw std::invalid_argument("counts: pair needs distinct edges");
    if (i > j) {
        std::swap(i, j);
        std::swap(si, sj);
    }
    return pair_[pair_index(i, j)][static_cast<size_t>(si * 2 + sj)];
}

std::string CountStore::serialize() const {
    std::ostringstream out;
    out << "travnav-counts v1\n";
    out << edges_ << ' ' << format_double(unary_alpha_) << ' ' << format_double(pair_alpha_) << ' '
        << revision_ << '\n';
    for (const auto& u : unary_) out << format_double(u[0]) << ' ' << format_double(u[1]) << '\n';
    for (const auto& p : pair_)
        out << format_double(p[0]) << ' ' << format_double(p[1]) << ' ' << format_double(p[2]) << ' '
            << format_double(p[3]) << '\n';
    return out.str();
}

CountStore CountStore::deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header != "travnav-counts v1") throw std::invalid_argument("counts: bad header");
    int edges;
    std::string ua, pa;
    uint64_t revision;
    in >> edges >> ua >> pa >> revision;
    if (!in) throw std::invalid_argument("counts: bad parameter line");
    CountStore cs(edges, parse_double(ua), parse_double(pa));
    cs.revision_ = revision;
    std::string a, b, c, d;
    for (auto& u : cs.unary_) {
        if (!(in >> a >> b)) throw std::invalid_argument("counts: truncated unary table");
        u = {parse_double(a), parse_double(b)};
    }
    for (auto& p : cs.pair_) {
        if (!(in >> a >> b >> c >> d)) throw std::invalid_argument("counts: truncated pair table");
        p = {parse_double(a), parse_double(b), parse_double(c), parse_double(d)};
    }
    return cs;
}

bool CountStore::operator==(const CountStore& other) const {
    return edges_ == other.edges_ && unary_alpha_ == other.unary_alpha_ &&
           pair_alpha_ == other.pair_alpha_ && unary_ == other.unary_ && pair_ == other.pair_;
}

// ---------------------------------------------------------------------------

FactorGraphModel::FactorGraphModel(int edge_count, ModelParams params, BpSettings bp)
    : counts_(edge_count, params.unary_alpha, params.pair_alpha), params_(params), bp_(bp) {
    rebuild();
}

size_t FactorGraphModel::pair_index(EdgeId i, EdgeId j) const {
    if (i > j) std::swap(i, j);
    const int m = counts_.edge_count();
    return static_cast<size_t>(i) * (2 * m - i - 1) / 2 + static_cast<size_t>(j - i - 1);
}

void FactorGraphModel::update(const ObservationSet& obs) {
    counts_.add(obs);
    rebuild();
}

void FactorGraphModel::restore_counts(CountStore counts) {
    if (counts.edge_count() != counts_.edge_count())
        throw std::invalid_argument("model: count store size mismatch");
    counts_ = std::move(counts);
    rebuild();
}

void FactorGraphModel::rebuild() {
    const int m = counts_.edge_count();
    prob_.resize(static_cast<size_t>(m));
    for (int e = 0; e < m; ++e) {
        const double c0 = counts_.unary(e, 0);
        const double c1 = counts_.unary(e, 1);
        prob_[static_cast<size_t>(e)] = c1 / (c0 + c1);
    }
    joint_.resize(static_cast<size_t>(m) * (m - 1) / 2);
    mi_.resize(joint_.size());
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            std::array<double, 4> cell{};
            double total = 0.0;
            for (int si = 0; si < 2; ++si)
                for (int sj = 0; sj < 2; ++sj) {
                    cell[static_cast<size_t>(si * 2 + sj)] = counts_.pair(i, j, si, sj);
                    total += cell[static_cast<size_t>(si * 2 + sj)];
                }
            for (auto& v : cell) v /= total;
            const size_t idx = pair_index(i, j);
            joint_[idx] = cell;

            // MI from the pairwise table and its own marginals, so it is a
            // true mutual information and never negative
            const double pi1 = cell[2] + cell[3];
            const double pj1 = cell[1] + cell[3];
            const double pi[2] = {1.0 - pi1, pi1};
            const double pj[2] = {1.0 - pj1, pj1};
            double value = 0.0;
            for (int si = 0; si < 2; ++si)
                for (int sj = 0; sj < 2; ++sj) {
                    const double p = cell[static_cast<size_t>(si * 2 + sj)];
                    if (p > 0.0) value += p * std::log2(p / (pi[si] * pj[sj]));
                }
            mi_[idx] = std::max(value, 0.0);
        }
    }
}

double FactorGraphModel::edge_prob(EdgeId e) const { return prob_[static_cast<size_t>(e)]; }

std::array<double, 4> FactorGraphModel::pair_joint(EdgeId i, EdgeId j) const {
    if (i == j) throw std::invalid_argument("model: pair needs distinct edges");
    if (i < j) return joint_[pair_index(i, j)];
    const auto& t = joint_[pair_index(j, i)];
    return {t[0], t[2], t[1], t[3]};
}

double FactorGraphModel::pairwise_mi(EdgeId i, EdgeId j) const {
    if (i == j) throw std::invalid_argument("model: MI needs distinct edges");
    return mi_[pair_index(i, j)];
}

FactorGraph FactorGraphModel::build_graph(const ObservationSet& obs) const {
    return build_graph(obs, [](EdgeId, EdgeId) { return true; });
}

FactorGraph FactorGraphModel::build_graph(const ObservationSet& obs,
                                          const std::function<bool(EdgeId, EdgeId)>& keep_pair) const {
    const int m = counts_.edge_count();
    FactorGraph graph(m);
    for (int e = 0; e < m; ++e) {
        const double p = prob_[static_cast<size_t>(e)];
        graph.set_unary(e, 1.0 - p, p);
    }
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            if (mi_[pair_index(i, j)] < params_.mi_threshold) continue;
            if (!keep_pair(i, j)) continue;
            const auto& jt = joint_[pair_index(i, j)];
            const double pi[2] = {1.0 - prob_[static_cast<size_t>(i)], prob_[static_cast<size_t>(i)]};
            const double pj[2] = {1.0 - prob_[static_cast<size_t>(j)], prob_[static_cast<size_t>(j)]};
            std::array<double, 4> psi{};
            for (int si = 0; si < 2; ++si)
                for (int sj = 0; sj < 2; ++sj)
                    psi[static_cast<size_t>(si * 2 + sj)] =
                        jt[static_cast<size_t>(si * 2 + sj)] / (pi[si] * pj[sj]);
            graph.add_pair(i, j, psi);
        }
    }
    for (const auto& [e, free] : obs) {
        if (e >= m) throw std::invalid_argument("model: observation edge out of range");
        graph.clamp(e, free ? 1 : 0);
    }
    return graph;
}

double FactorGraphModel::log_factor_product(const std::vector<uint8_t>& bits) const {
    const int m = counts_.edge_count();
    if (static_cast<int>(bits.size()) != m) throw std::invalid_argument("model: configuration size mismatch");
    double log_value = 0.0;
    for (int e = 0; e < m; ++e) {
        const double p = prob_[static_cast<size_t>(e)];
        log_value += std::log(bits[static_cast<size_t>(e)] ? p : 1.0 - p);
    }
    for (int i = 0; i < m; ++i)
        for (int j = i + 1; j < m; ++j) {
            const auto& jt = joint_[pair_index(i, j)];
            const double pi = bits[static_cast<size_t>(i)] ? prob_[static_cast<size_t>(i)]
                                                           : 1.0 - prob_[static_cast<size_t>(i)];
            const double pj = bits[static_cast<size_t>(j)] ? prob_[static_cast<size_t>(j)]
                                                           : 1.0 - prob_[static_cast<size_t>(j)];
            log_value += std::log(jt[static_cast<size_t>(bits[static_cast<size_t>(i)] * 2 +
                                                         bits[static_cast<size_t>(j)])] /
                                  (pi * pj));
        }
    return log_value;
}

BeliefState FactorGraphModel::predict(const ObservationSet& obs) const {
    const int m = counts_.edge_count();
    const FactorGraph graph = build_graph(obs);
    const BpResult res = run_bp(graph, bp_);

    BeliefState belief;
    belief.marginal.resize(static_cast<size_t>(m));
    belief.observed.assign(static_cast<size_t>(m), 0);
    belief.bp_converged = res.converged;
    belief.bp_iterations = res.iterations;
    belief.bp_max_delta = res.max_delta;
    for (int e = 0; e < m; ++e) {
        if (auto state = obs.get(e)) {
            belief.marginal[static_cast<size_t>(e)] = *state ? 1.0 : 0.0;
            belief.observed[static_cast<size_t>(e)] = 1;
        } else {
            belief.marginal[static_cast<size_t>(e)] = res.marginals[static_cast<size_t>(e)][1];
        }
    }
    return belief;
}

// ---------------------------------------------------------------------------

IndependentModel::IndependentModel(int edge_count, double alpha) {
    if (edge_count < 1) throw std::invalid_argument("model: need at least one edge");
    if (!(alpha > 0.0)) throw std::invalid_argument("model: alpha must be positive");
    counts_.assign(static_cast<size_t>(edge_count), {alpha, alpha});
}

void IndependentModel::update(const ObservationSet& obs) {
    for (const auto& [e, free] : obs) {
        if (e >= static_cast<int>(counts_.size()))
            throw std::invalid_argument("model: observation edge out of range");
        counts_[static_cast<size_t>(e)][free ? 1 : 0] += 1.0;
    }
}

double IndependentModel::edge_prob(EdgeId e) const {
    const auto& c = counts_[static_cast<size_t>(e)];
    return c[1] / (c[0] + c[1]);
}

BeliefState IndependentModel::predict(const ObservationSet& obs) const {
    BeliefState belief;
    belief.marginal.resize(counts_.size());
    belief.observed.assign(counts_.size(), 0);
    for (int e = 0; e < static_cast<int>(counts_.size()); ++e) {
        if (auto state = obs.get(e)) {
            belief.marginal[static_cast<size_t>(e)] = *state ? 1.0 : 0.0;
            belief.observed[static_cast<size_t>(e)] = 1;
        } else {
            belief.marginal[static_cast<size_t>(e)] = edge_prob(e);
        }
    }
    return belief;
}

// ---------------------------------------------------------------------------

FullJointModel::FullJointModel(int edge_count, double alpha) : edges_(edge_count) {
    if (edge_count < 1) throw std::invalid_argument("model: need at least one edge");
    if (edge_count > kMaxEdges)
        throw std::invalid_argument("full joint model: map too large (" + std::to_string(edge_count) +
                                    " edges, limit " + std::to_string(kMaxEdges) + ")");
    alpha_ = alpha >= 0.0 ? alpha : 0.25 * std::pow(2.0, 2 - edge_count);
    if (!(alpha_ > 0.0)) throw std::invalid_argument("model: alpha must be positive");
    counts_.assign(static_cast<size_t>(1) << edges_, alpha_);
    total_ = alpha_ * static_cast<double>(counts_.size());
}

void FullJointModel::update(const ObservationSet& obs) {
    if (obs.size() != edges_)
        throw std::invalid_argument("full joint model: needs full-configuration observations");
    size_t index = 0;
    for (const auto& [e, free] : obs)
        if (free) index |= static_cast<size_t>(1) << e;
    counts_[index] += 1.0;
    total_ += 1.0;
}

BeliefState FullJointModel::predict(const ObservationSet& obs) const {
    BeliefState belief;
    belief.marginal.resize(static_cast<size_t>(edges_));
    belief.observed.assign(static_cast<size_t>(edges_), 0);

    size_t fixed_bits = 0;
    size_t fixed_mask = 0;
    std::vector<int> free_slots;
    for (int e = 0; e < edges_; ++e) {
        if (auto state = obs.get(e)) {
            fixed_mask |= static_cast<size_t>(1) << e;
            if (*state) fixed_bits |= static_cast<size_t>(1) << e;
            belief.observed[static_cast<size_t>(e)] = 1;
            belief.marginal[static_cast<size_t>(e)] = *state ? 1.0 : 0.0;
        } else {
            free_slots.push_back(e);
        }
    }

    // exact conditioning: walk every configuration consistent with obs
    std::vector<double> ones(free_slots.size(), 0.0);
    double mass = 0.0;
    const size_t combos = static_cast<size_t>(1) << free_slots.size();
    for (size_t c = 0; c < combos; ++c) {
        size_t index = fixed_bits;
        for (size_t k = 0; k < free_slots.size(); ++k)
            if (c & (static_cast<size_t>(1) << k)) index |= static_cast<size_t>(1) << free_slots[k];
        const double w = counts_[index];
        mass += w;
        for (size_t k = 0; k < free_slots.size(); ++k)
            if (c & (static_cast<size_t>(1) << k)) ones[k] += w;
    }
    for (size_t k = 0; k < free_slots.size(); ++k)
        belief.marginal[static_cast<size_t>(free_slots[k])] = ones[k] / mass;
    return belief;
}

}  // namespace travnav
