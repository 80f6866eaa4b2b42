#ifndef GRAPHLOG_RNG_HPP
#define GRAPHLOG_RNG_HPP

#include <cstdint>
#include <random>

namespace graphlog {

// Deterministic random source. The mapping from engine output to doubles is
// spelled out here because the standard distributions are implementation
// defined and reports must be byte-identical across toolchains.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Decorrelated engine seed for (seed, index) pairs, one per solver seed.
    static std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t index) {
        return mix(seed + 0x9e3779b97f4a7c15ULL * (index + 1));
    }

    static Rng stream(std::uint64_t seed, std::uint64_t index) {
        return Rng(stream_seed(seed, index));
    }

    // Uniform in [0, 1): top 53 bits of the engine output.
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) {
        return lo + (hi - lo) * uniform01();
    }

    // Uniform in [-1, 1).
    double symmetric() { return uniform(-1.0, 1.0); }

    // Uniform index in [0, n).
    std::size_t index(std::size_t n) {
        auto k = static_cast<std::size_t>(uniform01() * static_cast<double>(n));
        return k < n ? k : n - 1;
    }

private:
    static std::uint64_t mix(std::uint64_t x) {
        x += 0x9e3779b97f4a7c15ULL;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    std::mt19937_64 engine_;
};

} // namespace graphlog

#endif
