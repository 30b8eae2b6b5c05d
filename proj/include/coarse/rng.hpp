#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace coarse {

// Deterministic generator. Only the raw mt19937_64 stream is used; the
// distribution helpers below are written out so that results do not depend
// on the standard library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, bound). bound must be positive.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % bound;
        std::uint64_t x = engine_();
        while (x >= limit) x = engine_();
        return x % bound;
    }

    // Exponential(1), used for Dirichlet sampling on simplices.
    double exponential() {
        double u = uniform();
        while (u <= 0.0) u = uniform();
        return -std::log(u);
    }

private:
    std::mt19937_64 engine_;
};

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Named substream: one seed per (stage, member) so that adding a stage never
// perturbs the draws of another.
inline std::uint64_t substream_seed(std::uint64_t seed, std::string_view stage,
                                    std::uint64_t member = 0) {
    std::uint64_t h = 0xcbf29ce484222325ULL;  // FNV-1a
    for (unsigned char c : stage) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return splitmix64(splitmix64(seed ^ h) + member);
}

inline Rng substream(std::uint64_t seed, std::string_view stage, std::uint64_t member = 0) {
    return Rng(substream_seed(seed, stage, member));
}

}  // namespace coarse
