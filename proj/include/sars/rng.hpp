#pragma once

#include <cstdint>
#include <limits>
#include <random>

namespace sars {

// Named sub-streams. Each consumer draws from its own generator so adding a
// consumer (or a workload group) never perturbs the others.
enum class Stream : std::uint64_t {
    Topology = 1,
    WorkloadGroup = 16, // + group index
    Reservation = 32,
    RandomRsp = 48,
};

// SplitMix64 finalizer, used to derive sub-stream seeds.
constexpr std::uint64_t mix_seed(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// mt19937_64 has a fully specified output sequence; the conversions below are
// done by hand because the standard distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}
    Rng(std::uint64_t seed, Stream stream, std::uint64_t index = 0)
        : engine_(mix_seed(mix_seed(seed) ^ (static_cast<std::uint64_t>(stream) + index))) {}

    std::uint64_t next() { return engine_(); }

    // Uniform in [0, 1) with 53 bits.
    double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform in [lo, hi]; the upper bound is reachable only through rounding.
    double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

    // Uniform integer in [0, n), rejection sampled.
    std::uint64_t index(std::uint64_t n) {
        const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                    std::numeric_limits<std::uint64_t>::max() % n;
        std::uint64_t x;
        do {
            x = next();
        } while (x >= limit);
        return x % n;
    }

    // Uniform integer in [lo, hi].
    std::int64_t integer(std::int64_t lo, std::int64_t hi) {
        return lo + static_cast<std::int64_t>(index(static_cast<std::uint64_t>(hi - lo) + 1));
    }

private:
    std::mt19937_64 engine_;
};

} // namespace sars
