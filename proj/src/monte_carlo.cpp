#include "backcom/monte_carlo.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <stdexcept>
#include <thread>

namespace backcom {

void RunningStats::merge(const RunningStats& other) noexcept
{
    if (other.count_ == 0) {
        return;
    }
    if (count_ == 0) {
        *this = other;
        return;
    }
    const double n_a = static_cast<double>(count_);
    const double n_b = static_cast<double>(other.count_);
    const double n = n_a + n_b;
    const double delta = other.mean_ - mean_;
    mean_ += delta * n_b / n;
    m2_ += other.m2_ + delta * delta * n_a * n_b / n;
    count_ += other.count_;
}

double RunningStats::variance() const noexcept
{
    return count_ > 1 ? std::max(0.0, m2_) / static_cast<double>(count_ - 1) : 0.0;
}

MCEstimate RunningStats::estimate() const noexcept
{
    MCEstimate e;
    e.mean = mean_;
    e.trials = count_;
    e.std_error = count_ > 0 ? std::sqrt(variance() / static_cast<double>(count_)) : 0.0;
    return e;
}

std::vector<RunningStats> run_batches(const BatchPlan& plan, std::size_t outputs,
                                      const TrialFunction& trial)
{
    if (plan.trials == 0 || plan.batch_size == 0 || plan.batch_size > plan.trials) {
        throw std::invalid_argument("run_batches: require trials >= batch_size >= 1");
    }
    const std::uint64_t batches = (plan.trials + plan.batch_size - 1) / plan.batch_size;
    std::vector<std::vector<RunningStats>> per_batch(batches,
                                                     std::vector<RunningStats>(outputs));

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        std::vector<double> values(outputs);
        while (true) {
            const std::uint64_t b = next.fetch_add(1);
            if (b >= batches) {
                return;
            }
            try {
                Rng rng = Rng::for_stream(plan.seed, b);
                const std::uint64_t begin = b * plan.batch_size;
                const std::uint64_t count = std::min(plan.batch_size, plan.trials - begin);
                auto& stats = per_batch[b];
                for (std::uint64_t t = 0; t < count; ++t) {
                    trial(rng, values);
                    for (std::size_t k = 0; k < outputs; ++k) {
                        stats[k].add(values[k]);
                    }
                }
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(batches);
                return;
            }
        }
    };

    unsigned threads = plan.threads != 0 ? plan.threads : std::thread::hardware_concurrency();
    threads = static_cast<unsigned>(
        std::clamp<std::uint64_t>(threads == 0 ? 1 : threads, 1, batches));
    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) {
            pool.emplace_back(worker);
        }
    }
    if (failure) {
        std::rethrow_exception(failure);
    }

    std::vector<RunningStats> total(outputs);
    for (const auto& batch : per_batch) {
        for (std::size_t k = 0; k < outputs; ++k) {
            total[k].merge(batch[k]);
        }
    }
    return total;
}

}  // namespace backcom
