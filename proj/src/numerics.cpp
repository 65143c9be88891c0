#include "backcom/numerics.hpp"

#include <string>

namespace backcom::numerics {

double beta_fn(double x, double y)
{
    if (!(x > 0.0) || !(y > 0.0)) {
        throw std::domain_error("beta_fn: arguments must be positive");
    }
    if (std::fabs(x + y - 1.0) <= 4.0 * std::numeric_limits<double>::epsilon()) {
        return std::numbers::pi / std::sin(std::numbers::pi * x);
    }
    return std::exp(std::lgamma(x) + std::lgamma(y) - std::lgamma(x + y));
}

double upper_incomplete_gamma(double a, double x, const QuadratureSpec& spec)
{
    if (!std::isfinite(a) || std::isnan(x) || x < 0.0) {
        throw std::domain_error("upper_incomplete_gamma: requires finite a and x >= 0");
    }
    if (x == 0.0) {
        if (a <= 0.0) {
            throw std::domain_error("upper_incomplete_gamma: diverges for x = 0, a <= 0");
        }
        return std::tgamma(a);
    }
    if (std::isinf(x)) {
        return 0.0;
    }
    // Gamma(a, x) = e^-x int_0^inf (x + u)^(a-1) e^-u du; the integrand varies on
    // the scale x near u = 0 and on the scale 1 further out.
    auto integrand = [a, x](double u) { return std::pow(x + u, a - 1.0) * std::exp(-u); };
    const double split = std::max(1.0, x);
    const double head = integrate_1d_breaks(integrand, 0.0, split, {x, 10.0 * x, 100.0 * x}, spec);
    const double tail = integrate_1d(integrand, split, std::numeric_limits<double>::infinity(), spec);
    return std::exp(-x) * (head + tail);
}

LogLogInterpolant::LogLogInterpolant(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("LogLogInterpolant: need matching samples, at least two");
    }
    const std::size_t n = x.size();
    lx_.resize(n);
    ly_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
            throw std::invalid_argument("LogLogInterpolant: samples must be positive (index "
                                        + std::to_string(i) + ")");
        }
        lx_[i] = std::log(x[i]);
        ly_[i] = std::log(y[i]);
        if (i > 0 && !(lx_[i] > lx_[i - 1])) {
            throw std::invalid_argument("LogLogInterpolant: abscissae must increase");
        }
    }
    // Fritsch-Carlson derivatives.
    std::vector<double> h(n - 1);
    std::vector<double> delta(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
        h[i] = lx_[i + 1] - lx_[i];
        delta[i] = (ly_[i + 1] - ly_[i]) / h[i];
    }
    slope_.assign(n, 0.0);
    slope_.front() = delta.front();
    slope_.back() = delta.back();
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (delta[i - 1] * delta[i] > 0.0) {
            const double w1 = 2.0 * h[i] + h[i - 1];
            const double w2 = h[i] + 2.0 * h[i - 1];
            slope_[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
        }
    }
}

double LogLogInterpolant::operator()(double x) const
{
    if (lx_.empty()) {
        throw std::logic_error("LogLogInterpolant: empty");
    }
    if (!(x > 0.0)) {
        return std::exp(ly_.front());
    }
    const double u = std::log(x);
    if (u <= lx_.front()) {
        return std::exp(ly_.front());
    }
    if (u >= lx_.back()) {
        return std::exp(ly_.back() + tail_slope() * (u - lx_.back()));
    }
    const auto it = std::upper_bound(lx_.begin(), lx_.end(), u);
    const std::size_t i = static_cast<std::size_t>(it - lx_.begin()) - 1;
    const double h = lx_[i + 1] - lx_[i];
    const double t = (u - lx_[i]) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double v = (2 * t3 - 3 * t2 + 1) * ly_[i] + (t3 - 2 * t2 + t) * h * slope_[i]
                     + (-2 * t3 + 3 * t2) * ly_[i + 1] + (t3 - t2) * h * slope_[i + 1];
    return std::exp(v);
}

double LogLogInterpolant::tail_slope() const
{
    const std::size_t n = lx_.size();
    return (ly_[n - 1] - ly_[n - 2]) / (lx_[n - 1] - lx_[n - 2]);
}

}  // namespace backcom::numerics
