#include "backcom/geometry.hpp"

#include <numbers>
#include <stdexcept>
#include <string>

namespace backcom {

namespace {
constexpr double pi = std::numbers::pi;
}

ClusterModel ClusterModel::matern(double radius)
{
    if (!(radius > 0.0) || !std::isfinite(radius)) {
        throw std::invalid_argument("Matern cluster radius must be positive and finite");
    }
    return {ClusterKind::matern, radius};
}

ClusterModel ClusterModel::thomas(double sigma)
{
    if (!(sigma > 0.0) || !std::isfinite(sigma)) {
        throw std::invalid_argument("Thomas cluster sigma must be positive and finite");
    }
    return {ClusterKind::thomas, sigma};
}

double ClusterModel::radial_pdf(double r) const
{
    if (r < 0.0) {
        throw std::invalid_argument("radial_pdf: negative distance");
    }
    if (kind_ == ClusterKind::matern) {
        return r <= scale_ ? 1.0 / (pi * scale_ * scale_) : 0.0;
    }
    const double var = scale_ * scale_;
    return std::exp(-r * r / (2.0 * var)) / (2.0 * pi * var);
}

double ClusterModel::radial_cdf(double r) const
{
    if (r <= 0.0) {
        return 0.0;
    }
    if (kind_ == ClusterKind::matern) {
        return r >= scale_ ? 1.0 : (r * r) / (scale_ * scale_);
    }
    return -std::expm1(-r * r / (2.0 * scale_ * scale_));
}

double ClusterModel::reach() const noexcept
{
    return kind_ == ClusterKind::matern ? scale_ : 6.0 * scale_;
}

double ClusterModel::integration_radius() const noexcept
{
    // exp(-50) ~ 2e-22 of the Thomas mass lies beyond 10 sigma.
    return kind_ == ClusterKind::matern ? scale_ : 10.0 * scale_;
}

Point ClusterModel::sample_offset(Rng& rng) const noexcept
{
    if (kind_ == ClusterKind::matern) {
        return sample_disk(scale_, rng);
    }
    const auto [gx, gy] = rng.normal_pair();
    return {scale_ * gx, scale_ * gy};
}

Point sample_disk(double radius, Rng& rng) noexcept
{
    const double r = radius * std::sqrt(rng.uniform_open());
    const double phi = 2.0 * pi * rng.uniform();
    return {r * std::cos(phi), r * std::sin(phi)};
}

Point sample_direction(Rng& rng) noexcept
{
    const double phi = 2.0 * pi * rng.uniform();
    return {std::cos(phi), std::sin(phi)};
}

std::vector<Point> sample_ppp(double density, const Window& window, Rng& rng)
{
    if (!(density >= 0.0) || !std::isfinite(density)) {
        throw std::invalid_argument("sample_ppp: density must be non-negative, got "
                                    + std::to_string(density));
    }
    if (!(window.radius > 0.0)) {
        throw std::invalid_argument("sample_ppp: window radius must be positive");
    }
    const auto count = rng.poisson(density * pi * window.radius * window.radius);
    std::vector<Point> points;
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        // Rejection from the bounding square avoids trigonometric calls.
        double u;
        double v;
        do {
            u = 2.0 * rng.uniform() - 1.0;
            v = 2.0 * rng.uniform() - 1.0;
        } while (u * u + v * v > 1.0);
        points.push_back(window.center + window.radius * Point{u, v});
    }
    return points;
}

std::vector<Point> sample_cluster(const ClusterModel& model, double mean_count, Point center,
                                  Rng& rng)
{
    if (!(mean_count >= 0.0)) {
        throw std::invalid_argument("sample_cluster: mean_count must be non-negative");
    }
    const auto count = rng.poisson(mean_count);
    std::vector<Point> points;
    points.reserve(count);
    for (std::uint64_t i = 0; i < count; ++i) {
        points.push_back(center + model.sample_offset(rng));
    }
    return points;
}

std::vector<Point> thin(std::span<const Point> points, double keep_prob, Rng& rng)
{
    if (!(keep_prob >= 0.0 && keep_prob <= 1.0)) {
        throw std::invalid_argument("thin: keep_prob must lie in [0, 1], got "
                                    + std::to_string(keep_prob));
    }
    std::vector<Point> kept;
    kept.reserve(static_cast<std::size_t>(keep_prob * static_cast<double>(points.size())) + 1);
    for (const Point& p : points) {
        if (rng.bernoulli(keep_prob)) {
            kept.push_back(p);
        }
    }
    return kept;
}

}  // namespace backcom
