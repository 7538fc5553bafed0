#pragma once

#include <cstdint>
#include <random>

namespace consensus {

// Derives an independent child seed from (base, stream) with one splitmix64 step.
// Used everywhere a run needs several decoupled random streams (per-trial seeds,
// per-attempt graph seeds, initial-state seeds) so that results are reproducible
// from a single base seed regardless of execution order.
inline std::uint64_t split_seed(std::uint64_t base, std::uint64_t stream) {
    std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

// Thin wrapper over std::mt19937_64 (algorithm fixed by the C++ standard, so
// sequences are reproducible across platforms).  The uniform mapping is done by
// hand because std::uniform_real_distribution is not guaranteed portable.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Uniform double in [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t next() { return gen_(); }

    // Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // Rejection-free modulo is fine here: consumers use tiny n for test drives.
        return gen_() % n;
    }

private:
    std::mt19937_64 gen_;
};

}  // namespace consensus
