#include "backcom/random.hpp"

#include <cmath>
#include <numbers>

namespace backcom {

namespace {

constexpr std::uint64_t rotl(std::uint64_t x, int k) noexcept
{
    return (x << k) | (x >> (64 - k));
}

constexpr double poisson_inversion_limit = 30.0;

}  // namespace

Rng::Rng(std::uint64_t seed) noexcept
{
    std::uint64_t s = seed;
    for (auto& word : state_) {
        s = splitmix64(s);
        word = s;
    }
}

Rng Rng::for_stream(std::uint64_t seed, std::uint64_t stream) noexcept
{
    // Two rounds so that neighbouring (seed, stream) pairs decorrelate.
    const std::uint64_t key = splitmix64(seed ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
    return Rng(splitmix64(key));
}

Rng::result_type Rng::operator()() noexcept
{
    const std::uint64_t result = rotl(state_[1] * 5, 7) * 9;
    const std::uint64_t t = state_[1] << 17;
    state_[2] ^= state_[0];
    state_[3] ^= state_[1];
    state_[1] ^= state_[2];
    state_[0] ^= state_[3];
    state_[2] ^= t;
    state_[3] = rotl(state_[3], 45);
    return result;
}

double Rng::uniform() noexcept
{
    return static_cast<double>((*this)() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open() noexcept
{
    return (static_cast<double>((*this)() >> 12) + 0.5) * 0x1.0p-52;
}

double Rng::exponential() noexcept
{
    return -std::log(uniform_open());
}

std::pair<double, double> Rng::normal_pair() noexcept
{
    // Marsaglia polar method.
    double u;
    double v;
    double s;
    do {
        u = 2.0 * uniform() - 1.0;
        v = 2.0 * uniform() - 1.0;
        s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double scale = std::sqrt(-2.0 * std::log(s) / s);
    return {u * scale, v * scale};
}

std::uint64_t Rng::poisson(double mean) noexcept
{
    if (!(mean > 0.0)) {
        return 0;
    }
    return mean < poisson_inversion_limit ? poisson_inversion(mean) : poisson_ptrs(mean);
}

std::uint64_t Rng::poisson_inversion(double mean) noexcept
{
    double u = uniform();
    double p = std::exp(-mean);
    std::uint64_t k = 0;
    // Sequential search; the guard stops at a count whose mass is negligible.
    while (u > p && k < 1000) {
        u -= p;
        ++k;
        p *= mean / static_cast<double>(k);
    }
    return k;
}

// Hoermann (1993), "The transformed rejection method for generating Poisson
// random variables".
std::uint64_t Rng::poisson_ptrs(double mean) noexcept
{
    const double slam = std::sqrt(mean);
    const double loglam = std::log(mean);
    const double b = 0.931 + 2.53 * slam;
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double vr = 0.9277 - 3.6224 / (b - 2.0);

    while (true) {
        const double u = uniform() - 0.5;
        const double v = uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= vr) {
            return static_cast<std::uint64_t>(k);
        }
        if (k < 0.0 || (us < 0.013 && v > us)) {
            continue;
        }
        const double lhs = std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b);
        const double rhs = -mean + k * loglam - std::lgamma(k + 1.0);
        if (lhs <= rhs) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

}  // namespace backcom
