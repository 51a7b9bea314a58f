#pragma once

#include <complex>
#include <cstdint>
#include <limits>

namespace bdris {

/**
 * Counter-based 64-bit generator.
 *
 * Each stream is identified by a 64-bit key; the n-th output is a SplitMix64
 * finalizer applied to key + n * golden-gamma, so a stream position is fully
 * described by (key, counter). split() derives an independent child key
 * without touching the parent's counter, which gives one stream per trial
 * (and per sub-purpose inside a trial) regardless of evaluation order.
 *
 * Floating point draws are produced by hand rather than through <random>
 * distributions so that sequences are identical across standard libraries.
 */
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ kSeedSalt)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return next_u64(); }

    std::uint64_t next_u64() { return mix(key_ + kGamma * ++counter_); }

    /// Uniform on [0, 1) with 53 random mantissa bits.
    double uniform();

    /// Standard normal via Box-Muller; caches the second value of each pair.
    double normal();

    /// Circularly-symmetric complex Gaussian with E|z|^2 = variance.
    std::complex<double> complex_normal(double variance = 1.0);

    /// Independent child stream; deterministic in (key, stream_id).
    Rng split(std::uint64_t stream_id) const;

    std::uint64_t key() const { return key_; }
    std::uint64_t counter() const { return counter_; }

    friend bool operator==(const Rng&, const Rng&) = default;

    static std::uint64_t mix(std::uint64_t z);

private:
    struct FromKey {};
    Rng(FromKey, std::uint64_t key) : key_(key) {}

    static constexpr std::uint64_t kGamma = 0x9e3779b97f4a7c15ULL;
    static constexpr std::uint64_t kSeedSalt = 0x6a09e667f3bcc909ULL;

    std::uint64_t key_;
    std::uint64_t counter_ = 0;
    double cached_normal_ = 0.0;
    bool has_cached_ = false;
};

/// Seed of the independent stream for one Monte Carlo trial.
std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial);

} // namespace bdris
