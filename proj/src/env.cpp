#include "travnav/env.hpp"

#include <algorithm>
#include <cmath>
#include <charconv>
#include <sstream>
#include <stdexcept>

#include "travnav/rng.hpp"

namespace travnav {

namespace {

// stream tags so templates, runs and tasks never share a stream
constexpr uint64_t kTemplateTag = 0x74656d70;
constexpr uint64_t kRunTag = 0x72756e73;
constexpr uint64_t kTaskTag = 0x7461736b;

constexpr int kTemplateRetries = 100;

std::string format_double(double v) {
    char buf[64];
    auto [p, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, p);
}

std::vector<uint8_t> parse_bitstring(const std::string& s, int expected) {
    if (static_cast<int>(s.size()) != expected)
        throw std::invalid_argument("bad bit string length " + std::to_string(s.size()));
    std::vector<uint8_t> bits(s.size());
    for (size_t i = 0; i < s.size(); ++i) {
        if (s[i] != '0' && s[i] != '1') throw std::invalid_argument("bad bit character in " + s);
        bits[i] = static_cast<uint8_t>(s[i] - '0');
    }
    return bits;
}

std::string bitstring(const std::vector<uint8_t>& bits) {
    std::string s(bits.size(), '0');
    for (size_t i = 0; i < bits.size(); ++i)
        if (bits[i]) s[i] = '1';
    return s;
}

}  // namespace

TemplateSet gen_templates(const TopologicalMap& map, int count, double free_prob, uint64_t seed) {
    if (count < 1) throw std::invalid_argument("gen_templates: need at least one template");
    if (!(free_prob > 0.0 && free_prob <= 1.0))
        throw std::invalid_argument("gen_templates: free_prob must be in (0,1]");

    const int m = map.edge_count();
    TemplateSet ts;
    ts.edge_count = m;
    ts.seed = seed;
    for (int t = 0; t < count; ++t) {
        bool accepted = false;
        for (int attempt = 0; attempt < kTemplateRetries && !accepted; ++attempt) {
            Rng rng(mix_seed(seed, kTemplateTag, static_cast<uint64_t>(t), static_cast<uint64_t>(attempt)));
            std::vector<uint8_t> bits(static_cast<size_t>(m));
            bool any_free = false;
            for (int e = 0; e < m; ++e) {
                bits[static_cast<size_t>(e)] = rng.bernoulli(free_prob) ? 1 : 0;
                any_free = any_free || bits[static_cast<size_t>(e)];
            }
            // a template with a free edge connects at least one node pair
            if (any_free) {
                ts.templates.push_back(std::move(bits));
                accepted = true;
            }
        }
        if (!accepted)
            throw std::runtime_error("gen_templates: retry budget exhausted for template " + std::to_string(t) +
                                     " (free_prob too low for this map)");
    }
    return ts;
}

EnvConfiguration sample_configuration(const TemplateSet& ts, int run) {
    if (ts.templates.empty()) throw std::invalid_argument("sample_configuration: empty template set");
    if (!(ts.noise >= 0.0 && ts.noise < 0.5))
        throw std::invalid_argument("sample_configuration: noise must be in [0, 0.5)");

    Rng rng(mix_seed(ts.seed, kRunTag, static_cast<uint64_t>(run)));
    const auto& tmpl = ts.templates[rng.below(ts.templates.size())];
    EnvConfiguration cfg;
    cfg.run = run;
    cfg.bits = tmpl;
    for (auto& b : cfg.bits)
        if (rng.bernoulli(ts.noise)) b ^= 1;
    return cfg;
}

EnvConfiguration sample_independent(int edge_count, double free_prob, uint64_t seed, int run) {
    Rng rng(mix_seed(seed, kRunTag, static_cast<uint64_t>(run)));
    EnvConfiguration cfg;
    cfg.run = run;
    cfg.bits.resize(static_cast<size_t>(edge_count));
    for (auto& b : cfg.bits) b = rng.bernoulli(free_prob) ? 1 : 0;
    return cfg;
}

std::vector<double> empirical_mi_matrix(const std::vector<EnvConfiguration>& configs) {
    if (configs.empty()) throw std::invalid_argument("empirical_mi_matrix: no configurations");
    const int m = configs.front().edge_count();
    const int samples = static_cast<int>(configs.size());

    std::vector<uint8_t> draws(static_cast<size_t>(samples) * static_cast<size_t>(m));
    for (int s = 0; s < samples; ++s) {
        if (configs[static_cast<size_t>(s)].edge_count() != m)
            throw std::invalid_argument("empirical_mi_matrix: mixed configuration sizes");
        std::copy(configs[static_cast<size_t>(s)].bits.begin(), configs[static_cast<size_t>(s)].bits.end(),
                  draws.begin() + static_cast<size_t>(s) * m);
    }

    std::vector<double> mi(static_cast<size_t>(m) * static_cast<size_t>(m), 0.0);
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j) {
            double joint[4] = {0, 0, 0, 0};
            for (int s = 0; s < samples; ++s) {
                const uint8_t* row = &draws[static_cast<size_t>(s) * m];
                joint[row[i] * 2 + row[j]] += 1.0;
            }
            double pi1 = (joint[2] + joint[3]) / samples;
            double pj1 = (joint[1] + joint[3]) / samples;
            const double pi[2] = {1.0 - pi1, pi1};
            const double pj[2] = {1.0 - pj1, pj1};
            double value = 0.0;
            for (int si = 0; si < 2; ++si) {
                for (int sj = 0; sj < 2; ++sj) {
                    double p = joint[si * 2 + sj] / samples;
                    if (p > 0.0 && pi[si] > 0.0 && pj[sj] > 0.0)
                        value += p * std::log2(p / (pi[si] * pj[sj]));
                }
            }
            value = std::max(value, 0.0);
            mi[static_cast<size_t>(i) * m + j] = value;
            mi[static_cast<size_t>(j) * m + i] = value;
        }
    }
    return mi;
}

std::vector<double> correlation_profile(const TemplateSet& ts, int samples) {
    if (samples < 1000) throw std::invalid_argument("correlation_profile: need at least 1000 samples");
    std::vector<EnvConfiguration> configs;
    configs.reserve(static_cast<size_t>(samples));
    for (int s = 0; s < samples; ++s) configs.push_back(sample_configuration(ts, s));
    return empirical_mi_matrix(configs);
}

TaskSequence gen_tasks(const TopologicalMap& map, int cycle, uint64_t seed) {
    if (cycle < 1) throw std::invalid_argument("gen_tasks: cycle must be positive");
    if (map.node_count() < 2) throw std::invalid_argument("gen_tasks: need at least two nodes");
    Rng rng(mix_seed(seed, kTaskTag));
    TaskSequence seq;
    seq.tasks.reserve(static_cast<size_t>(cycle));
    const uint64_t n = static_cast<uint64_t>(map.node_count());
    for (int i = 0; i < cycle; ++i) {
        Task t;
        t.start = static_cast<NodeId>(rng.below(n));
        t.goal = static_cast<NodeId>(rng.below(n - 1));
        if (t.goal >= t.start) ++t.goal;
        seq.tasks.push_back(t);
    }
    return seq;
}

EnvConfiguration EnvGenerator::sample(int run) const {
    if (kind == Kind::templates) return sample_configuration(templates, run);
    return sample_independent(edge_count, free_prob, seed, run);
}

EnvGenerator make_template_generator(const TopologicalMap& map, int count, double noise,
                                     double free_prob, uint64_t seed) {
    if (!(noise >= 0.0 && noise < 0.5))
        throw std::invalid_argument("make_template_generator: noise must be in [0, 0.5)");
    EnvGenerator gen;
    gen.kind = EnvGenerator::Kind::templates;
    gen.templates = gen_templates(map, count, free_prob, seed);
    gen.templates.noise = noise;
    gen.edge_count = map.edge_count();
    gen.free_prob = free_prob;
    gen.seed = seed;
    return gen;
}

EnvGenerator make_independent_generator(const TopologicalMap& map, double free_prob, uint64_t seed) {
    EnvGenerator gen;
    gen.kind = EnvGenerator::Kind::independent;
    gen.edge_count = map.edge_count();
    gen.free_prob = free_prob;
    gen.seed = seed;
    return gen;
}

std::string format_templates(const TemplateSet& ts) {
    std::ostringstream out;
    out << "travnav-templates v1\n";
    out << ts.edge_count << ' ' << ts.templates.size() << ' ' << format_double(ts.noise) << ' ' << ts.seed << '\n';
    for (const auto& t : ts.templates) out << bitstring(t) << '\n';
    return out.str();
}

TemplateSet parse_templates(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header != "travnav-templates v1") throw std::invalid_argument("templates: bad header");
    TemplateSet ts;
    size_t count = 0;
    in >> ts.edge_count >> count >> ts.noise >> ts.seed;
    if (!in) throw std::invalid_argument("templates: bad parameter line");
    for (size_t i = 0; i < count; ++i) {
        std::string bits;
        in >> bits;
        if (!in) throw std::invalid_argument("templates: missing template " + std::to_string(i));
        ts.templates.push_back(parse_bitstring(bits, ts.edge_count));
    }
    return ts;
}

std::string format_configurations(const std::vector<EnvConfiguration>& configs) {
    std::ostringstream out;
    out << "travnav-configs v1\n";
    for (const auto& c : configs) out << c.run << ' ' << bitstring(c.bits) << '\n';
    return out.str();
}

std::vector<EnvConfiguration> parse_configurations(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header != "travnav-configs v1") throw std::invalid_argument("configs: bad header");
    std::vector<EnvConfiguration> configs;
    int run;
    std::string bits;
    while (in >> run >> bits) {
        EnvConfiguration c;
        c.run = run;
        c.bits = parse_bitstring(bits, static_cast<int>(bits.size()));
        configs.push_back(std::move(c));
    }
    return configs;
}

std::string format_tasks(const TaskSequence& tasks) {
    std::ostringstream out;
    out << "travnav-tasks v1\n";
    for (const auto& t : tasks.tasks) out << t.start << ' ' << t.goal << '\n';
    return out.str();
}

TaskSequence parse_tasks(const std::string& text) {
    std::istringstream in(text);
    std::string header;
    std::getline(in, header);
    if (header != "travnav-tasks v1") throw std::invalid_argument("tasks: bad header");
    TaskSequence seq;
    Task t;
    while (in >> t.start >> t.goal) {
        if (t.start == t.goal) throw std::invalid_argument("tasks: start equals goal");
        seq.tasks.push_back(t);
    }
    if (seq.tasks.empty()) throw std::invalid_argument("tasks: empty sequence");
    return seq;
}

}  // namespace travnav
