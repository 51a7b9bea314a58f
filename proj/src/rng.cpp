#include "bdris/rng.hpp"

#include <cmath>

namespace bdris {

std::uint64_t Rng::mix(std::uint64_t z)
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform()
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_cached_) {
        has_cached_ = false;
        return cached_normal_;
    }
    // 1 - u lies in (0, 1], keeping log finite.
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phase = 2.0 * 3.14159265358979323846 * u2;
    cached_normal_ = r * std::sin(phase);
    has_cached_ = true;
    return r * std::cos(phase);
}

std::complex<double> Rng::complex_normal(double variance)
{
    const double u1 = 1.0 - uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-variance * std::log(u1));
    const double phase = 2.0 * 3.14159265358979323846 * u2;
    return {r * std::cos(phase), r * std::sin(phase)};
}

Rng Rng::split(std::uint64_t stream_id) const
{
    return Rng(FromKey{}, mix(key_ ^ mix(stream_id + kGamma)));
}

std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t trial)
{
    return Rng::mix(Rng::mix(base_seed) + 0x9e3779b97f4a7c15ULL * (trial + 1));
}

} // namespace bdris
