#pragma once

#include <array>
#include <cstdint>
#include <limits>
#include <utility>

namespace backcom {

/// SplitMix64 finalizer. Used for seeding and for deriving stream seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/*!
 * xoshiro256** engine with the variate generators used by the samplers.
 *
 * All variates are produced by code in this project rather than the standard
 * library distributions, so a (seed, stream) pair yields the same sequence on
 * every platform.
 */
class Rng
{
  public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 1) noexcept;

    /// Independent stream derived from (seed, stream) by a counter-based mix.
    static Rng for_stream(std::uint64_t seed, std::uint64_t stream) noexcept;

    static constexpr result_type min() noexcept { return 0; }
    static constexpr result_type max() noexcept
    {
        return std::numeric_limits<result_type>::max();
    }

    result_type operator()() noexcept;

    /// Uniform on [0, 1) with 53 random bits.
    double uniform() noexcept;
    /// Uniform on (0, 1).
    double uniform_open() noexcept;
    /// Unit-mean exponential.
    double exponential() noexcept;
    /// Pair of independent standard normals (Marsaglia polar method).
    std::pair<double, double> normal_pair() noexcept;
    bool bernoulli(double p) noexcept { return uniform() < p; }
    /// Uniform index in [0, n) for n >= 1.
    std::uint64_t index(std::uint64_t n) noexcept
    {
        const auto i = static_cast<std::uint64_t>(uniform() * static_cast<double>(n));
        return i < n ? i : n - 1;
    }

    /// Poisson count: CDF inversion below mean 30, PTRS rejection above.
    std::uint64_t poisson(double mean) noexcept;

  private:
    std::uint64_t poisson_inversion(double mean) noexcept;
    std::uint64_t poisson_ptrs(double mean) noexcept;

    std::array<std::uint64_t, 4> state_;
};

}  // namespace backcom
