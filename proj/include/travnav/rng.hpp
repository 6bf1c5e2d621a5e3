#pragma once

#include <cstdint>
#include <random>

namespace travnav {

// splitmix64 finalizer; used to derive decorrelated seeds for sub-streams.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b) {
    return splitmix64(splitmix64(a) + 0x9e3779b97f4a7c15ULL * (b + 1));
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c) {
    return mix_seed(mix_seed(a, b), c);
}

inline uint64_t mix_seed(uint64_t a, uint64_t b, uint64_t c, uint64_t d) {
    return mix_seed(mix_seed(a, b, c), d);
}

// mt19937_64 with hand-rolled draws. std::uniform_*_distribution is
// implementation-defined, so seeded experiments would not replay across
// standard libraries; these draws are fully specified.
class Rng {
  public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    // uniform in [0, 1), 53 bits
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    bool bernoulli(double p) { return uniform() < p; }

    // uniform integer in [0, n); modulo bias is below n / 2^64
    uint64_t below(uint64_t n) { return engine_() % n; }

    uint64_t raw() { return engine_(); }

  private:
    std::mt19937_64 engine_;
};

}  // namespace travnav
