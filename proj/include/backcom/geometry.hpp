#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "backcom/random.hpp"

namespace backcom {

struct Point
{
    double x = 0.0;
    double y = 0.0;

    friend constexpr Point operator+(Point a, Point b) noexcept { return {a.x + b.x, a.y + b.y}; }
    friend constexpr Point operator-(Point a, Point b) noexcept { return {a.x - b.x, a.y - b.y}; }
    friend constexpr Point operator*(double k, Point p) noexcept { return {k * p.x, k * p.y}; }
    friend constexpr bool operator==(Point, Point) = default;
};

constexpr double squared_norm(Point p) noexcept { return p.x * p.x + p.y * p.y; }
inline double norm(Point p) noexcept { return std::hypot(p.x, p.y); }
inline double distance(Point a, Point b) noexcept { return norm(a - b); }

enum class ClusterKind { matern, thomas };

/*!
 * Radial displacement law of a cluster member around its cluster centre.
 *
 * Matern: uniform on a disk of radius a. Thomas: isotropic Gaussian with
 * per-coordinate standard deviation sigma.
 */
class ClusterModel
{
  public:
    static ClusterModel matern(double radius);
    static ClusterModel thomas(double sigma);

    ClusterKind kind() const noexcept { return kind_; }
    /// a for Matern, sigma for Thomas.
    double scale() const noexcept { return scale_; }

    /// Two-dimensional density f(r) of the offset at distance r (1/m^2).
    double radial_pdf(double r) const;
    /// P(|offset| <= r).
    double radial_cdf(double r) const;
    /// Radius beyond which members are ignored when sizing sampling regions:
    /// a for Matern, 6 sigma for Thomas.
    double reach() const noexcept;
    /// Radius that carries all but a negligible (< 1e-20) fraction of the mass;
    /// used as the upper limit of radial integrals.
    double integration_radius() const noexcept;

    Point sample_offset(Rng& rng) const noexcept;

    friend bool operator==(const ClusterModel&, const ClusterModel&) = default;

  private:
    ClusterModel(ClusterKind kind, double scale) : kind_(kind), scale_(scale) {}

    ClusterKind kind_;
    double scale_;
};

/// Disk-shaped sampling region.
struct Window
{
    Point center;
    double radius = 1.0;

    bool contains(Point p) const noexcept { return squared_norm(p - center) <= radius * radius; }
};

/// Homogeneous PPP on the window.
std::vector<Point> sample_ppp(double density, const Window& window, Rng& rng);

/// One cluster with a Poisson(mean_count) number of members around center.
std::vector<Point> sample_cluster(const ClusterModel& model, double mean_count, Point center,
                                  Rng& rng);

/// Independent thinning with retention probability keep_prob.
std::vector<Point> thin(std::span<const Point> points, double keep_prob, Rng& rng);

inline double radial_pdf(const ClusterModel& model, double r) { return model.radial_pdf(r); }

/// Uniform point on a disk of the given radius centred at the origin.
Point sample_disk(double radius, Rng& rng) noexcept;
/// Unit vector in a uniformly random direction.
Point sample_direction(Rng& rng) noexcept;

}  // namespace backcom
