#pragma once

/// @file rng.hpp
/// Seeded random streams.
///
/// Every stream is a std::mt19937_64 whose output sequence is fixed by the
/// C++ standard. The std::*_distribution adaptors are implementation-defined,
/// so all conversions (unit reals, bounded integers, coins) are done here by
/// hand to keep draws bit-identical across standard libraries.
///
/// Sub-streams are keyed by a tuple of 64-bit tags (base seed, run, generation,
/// purpose, ...) folded through SplitMix64. Distinct tuples give unrelated
/// seeds; the fold is order-sensitive, so (a, b) and (b, a) differ.

#include <cstdint>
#include <initializer_list>
#include <random>

namespace daeeda {

/// Purpose tags used when deriving per-generation sub-streams.
enum class StreamPurpose : std::uint64_t {
    init_population = 1,
    selection = 2,
    model_init = 3,
    training = 4,
    sampling = 5,
    pbil_sampling = 6,
    problem_instance = 7,
    sweep_run = 8,
};

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

/// Folds a tag sequence into one seed.
constexpr std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> tags) noexcept {
    std::uint64_t h = mix64(base);
    for (auto t : tags) {
        h = mix64(h ^ mix64(t + 0x632BE59BD9B4E019ULL));
    }
    return h;
}

class Rng {
  public:
    explicit Rng(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    /// Independent stream keyed by (this stream's seed, tags...).
    [[nodiscard]] Rng substream(std::initializer_list<std::uint64_t> tags) const {
        return Rng(derive_seed(seed_, tags));
    }
    [[nodiscard]] Rng substream(std::uint64_t generation, StreamPurpose purpose) const {
        return substream({generation, static_cast<std::uint64_t>(purpose)});
    }

    std::uint64_t seed() const noexcept { return seed_; }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, bound). Lemire's multiply-shift with rejection.
    std::uint64_t below(std::uint64_t bound);

    bool coin() { return (engine_() >> 63) != 0; }

    /// True with probability p (p in [0,1]). p = 0 never fires, p = 1 always does.
    bool bernoulli(double p) { return uniform() < p; }

  private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

/// Fisher-Yates over a random-access range using Rng::below.
template <typename It>
void shuffle(It first, It last, Rng& rng) {
    auto n = static_cast<std::uint64_t>(last - first);
    for (std::uint64_t i = n; i > 1; --i) {
        auto j = rng.below(i);
        using std::swap;
        swap(first[i - 1], first[j]);
    }
}

} // namespace daeeda
