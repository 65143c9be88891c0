#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "backcom/random.hpp"

namespace backcom {

/// Mean, standard error and trial count of a Monte Carlo estimand.
struct MCEstimate
{
    double mean = 0.0;
    double std_error = 0.0;
    std::uint64_t trials = 0;
};

/// Welford accumulator; merge() uses the pairwise update of Chan et al.
class RunningStats
{
  public:
    void add(double x) noexcept
    {
        ++count_;
        const double delta = x - mean_;
        mean_ += delta / static_cast<double>(count_);
        m2_ += delta * (x - mean_);
    }

    void merge(const RunningStats& other) noexcept;

    std::uint64_t count() const noexcept { return count_; }
    double mean() const noexcept { return mean_; }
    /// Sample variance (n - 1 denominator).
    double variance() const noexcept;
    MCEstimate estimate() const noexcept;

  private:
    std::uint64_t count_ = 0;
    double mean_ = 0.0;
    double m2_ = 0.0;
};

struct BatchPlan
{
    std::uint64_t trials = 0;
    std::uint64_t batch_size = 1;
    std::uint64_t seed = 1;
    unsigned threads = 0;  ///< 0 selects std::thread::hardware_concurrency()
};

/// Fills one value per output for one trial.
using TrialFunction = std::function<void(Rng&, std::span<double>)>;

/*!
 * Runs plan.trials trials split into batches of plan.batch_size.
 *
 * Batch b draws from Rng::for_stream(seed, b) and batches are merged in
 * index order, so the result depends only on (seed, batch_size, trials) and
 * not on the thread count or scheduling.
 */
std::vector<RunningStats> run_batches(const BatchPlan& plan, std::size_t outputs,
                                      const TrialFunction& trial);

}  // namespace backcom
