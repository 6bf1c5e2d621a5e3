#include "travnav/factor_graph.hpp"

#include <stdexcept>

#include <json.hpp>

namespace travnav {

namespace {

uint64_t pair_key(int a, int b) {
    if (a > b) std::swap(a, b);
    return (static_cast<uint64_t>(a) << 32) | static_cast<uint64_t>(b);
}

}  // namespace

FactorGraph::FactorGraph(int var_count) {
    if (var_count < 1) throw std::invalid_argument("factor graph: need at least one variable");
    unary_.assign(static_cast<size_t>(var_count), {1.0, 1.0});
    clamp_.assign(static_cast<size_t>(var_count), -1);
}

void FactorGraph::set_unary(int v, double p0, double p1) {
    if (v < 0 || v >= var_count()) throw std::invalid_argument("factor graph: invalid variable " + std::to_string(v));
    if (!(p0 > 0.0) || !(p1 > 0.0)) throw std::invalid_argument("factor graph: unary entries must be positive");
    unary_[static_cast<size_t>(v)] = {p0, p1};
}

void FactorGraph::add_pair(int a, int b, const std::array<double, 4>& table) {
    if (a < 0 || a >= var_count() || b < 0 || b >= var_count())
        throw std::invalid_argument("factor graph: invalid pair variable");
    if (a == b) throw std::invalid_argument("factor graph: pair factor needs two distinct variables");
    for (double t : table)
        if (!(t > 0.0)) throw std::invalid_argument("factor graph: pair entries must be positive");
    if (!pair_keys_.insert(pair_key(a, b)).second)
        throw std::invalid_argument("factor graph: duplicate pair factor (" + std::to_string(a) + "," +
                                    std::to_string(b) + ")");
    pairs_.push_back({a, b, table});
}

void FactorGraph::clamp(int v, int value) {
    if (v < 0 || v >= var_count()) throw std::invalid_argument("factor graph: invalid variable " + std::to_string(v));
    if (value != 0 && value != 1) throw std::invalid_argument("factor graph: clamp value must be 0 or 1");
    int8_t& slot = clamp_[static_cast<size_t>(v)];
    if (slot != -1 && slot != value)
        throw std::invalid_argument("factor graph: conflicting clamp for variable " + std::to_string(v));
    slot = static_cast<int8_t>(value);
}

std::string FactorGraph::dump_json() const {
    nlohmann::json doc;
    doc["variables"] = nlohmann::json::array();
    for (int v = 0; v < var_count(); ++v) {
        nlohmann::json item;
        item["id"] = v;
        item["unary"] = {unary_[static_cast<size_t>(v)][0], unary_[static_cast<size_t>(v)][1]};
        if (clamp_[static_cast<size_t>(v)] != -1) item["clamp"] = static_cast<int>(clamp_[static_cast<size_t>(v)]);
        doc["variables"].push_back(item);
    }
    doc["factors"] = nlohmann::json::array();
    for (const auto& f : pairs_) {
        nlohmann::json item;
        item["a"] = f.a;
        item["b"] = f.b;
        item["table"] = {f.table[0], f.table[1], f.table[2], f.table[3]};
        doc["factors"].push_back(item);
    }
    return doc.dump(2);
}

}  // namespace travnav
