#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

namespace capnet {

/// Counter-based splitmix64 generator. Seeding contract: Rng(seed) always
/// produces the same sequence; Rng::stream(master, index) derives the
/// independent stream used for sample `index`, so aggregated statistics do
/// not depend on how samples are distributed over workers.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    static Rng stream(std::uint64_t master, std::uint64_t index) {
        return Rng(mix(master + 0x9E3779B97F4A7C15ULL * (index + 1)));
    }

    std::uint64_t next_u64() {
        state_ += 0x9E3779B97F4A7C15ULL;
        return mix(state_);
    }

    /// Uniform in [0, 1).
    double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double next_uniform(double lo, double hi) { return lo + (hi - lo) * next_double(); }

    double next_exponential(double rate) { return -std::log(1.0 - next_double()) / rate; }

    std::uint64_t next_below(std::uint64_t n) { return next_u64() % n; }

    /// Index into a cumulative-walk categorical; weights need not be
    /// normalized. Returns the last positive-weight index on fp leftovers.
    template <class T>
    std::size_t next_categorical(const std::vector<std::pair<T, double>>& weighted) {
        double total = 0.0;
        for (const auto& [_, w] : weighted) total += w;
        double u = next_double() * total;
        double acc = 0.0;
        std::size_t last_positive = 0;
        for (std::size_t i = 0; i < weighted.size(); ++i) {
            if (weighted[i].second > 0.0) last_positive = i;
            acc += weighted[i].second;
            if (u < acc) return i;
        }
        return last_positive;
    }

  private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t state_;
};

}  // namespace capnet
