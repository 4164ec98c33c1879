#pragma once

#include <cstdint>

namespace ergopress {

// Counted splittable generator (splitmix64 core). Every random choice in the
// harness flows from one seed through split(), so reports are reproducible
// regardless of scheduling or thread count.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ull);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
        return z ^ (z >> 31);
    }

    // Independent child stream for task `index`.
    Rng split(std::uint64_t index) const {
        Rng probe(state_ ^ (0xA0761D6478BD642Full * (index + 1)));
        return Rng(probe.next());
    }

    // Uniform in [0,1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), n > 0. Modulo bias is irrelevant here.
    int uniform_int(int n) { return static_cast<int>(next() % static_cast<std::uint64_t>(n)); }

    // Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

} // namespace ergopress
