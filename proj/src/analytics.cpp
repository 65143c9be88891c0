#include "backcom/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include <spdlog/spdlog.h>

#include "backcom/channel.hpp"
#include "backcom/numerics.hpp"

namespace backcom::analytics {

namespace {

using numerics::integrate_1d;
using numerics::integrate_1d_breaks;
using numerics::QuadratureSpec;

constexpr double pi = std::numbers::pi;
constexpr double inf = std::numeric_limits<double>::infinity();
constexpr double rho_floor = 1e-3;

QuadratureSpec inner_spec(const AnalyticsOptions& opts) { return {opts.inner_tol, 1e-300, 40}; }
QuadratureSpec outer_spec(const AnalyticsOptions& opts) { return {opts.outer_tol, 1e-300, 40}; }

void check_s(double s)
{
    if (std::isnan(s) || s < 0.0) {
        throw std::invalid_argument("s: must be non-negative");
    }
}

/// 1 / (s beta eta g); 0 for s = inf.
double inverse_gain(double s, const NetworkParams& params)
{
    return std::isinf(s) ? 0.0 : 1.0 / (s * params.beta * params.eta * params.g);
}

double q_radius(const NetworkParams& params)
{
    return std::min(d0_threshold(params), params.cluster.integration_radius());
}

/// q as a function of rho = |y - z|.
double q_radial(double s, double rho, const NetworkParams& params, const AnalyticsOptions& opts)
{
    const double r_max = q_radius(params);
    if (s == 0.0 || !(r_max > 0.0)) {
        return 0.0;
    }
    const double k = inverse_gain(s, params);
    const QuadratureSpec spec = inner_spec(opts);
    const ClusterModel& cluster = params.cluster;
    const double a1 = params.alpha1;
    const double a2 = params.alpha2;

    // Write x in polar form around the origin with psi measured from -w, so
    // |x + w|^2 = (r - rho)^2 + 4 r rho sin^2(psi / 2) and the peak of the
    // integrand sits at psi = 0, r = rho.
    auto ring = [&](double r) {
        const double fr = cluster.radial_pdf(r);
        if (fr == 0.0 || r == 0.0) {
            return 0.0;
        }
        const double gain = k * std::pow(r, a1);
        const double dr = r - rho;
        auto along = [&](double psi) {
            const double sh = std::sin(0.5 * psi);
            const double d2 = dr * dr + 4.0 * r * rho * sh * sh;
            return 1.0 / (1.0 + gain * power_from_squared(d2, a2));
        };
        double value;
        if (gain > 0.0 && rho > 0.0) {
            const double w = std::pow(gain, -1.0 / a2) / std::sqrt(r * rho);
            value = integrate_1d_breaks(along, 0.0, pi, {0.25 * w, w, 4.0 * w}, spec);
        } else {
            value = integrate_1d(along, 0.0, pi, spec);
        }
        return 2.0 * r * fr * value;
    };
    const double w_r = k > 0.0 && rho > 0.0 ? std::pow(k * std::pow(rho, a1), -1.0 / a2) : 0.0;
    return integrate_1d_breaks(ring, 0.0, r_max, {rho - w_r, rho, rho + w_r}, spec);
}

double u_radial(double s, double rho, const NetworkParams& params, const AnalyticsOptions& opts)
{
    if (s == 0.0) {
        return 0.0;
    }
    const double k = inverse_gain(s, params);
    const ClusterModel& cluster = params.cluster;
    const double r_max = cluster.integration_radius();
    auto integrand = [&](double r) {
        return 2.0 * pi * r * cluster.radial_pdf(r)
               / (1.0 + k * std::pow(r, params.alpha1) * std::pow(rho, params.alpha2));
    };
    const double knee = k > 0.0 && rho > 0.0
                            ? std::pow(k * std::pow(rho, params.alpha2), -1.0 / params.alpha1)
                            : inf;
    return integrate_1d_breaks(integrand, 0.0, r_max, {0.1 * knee, knee, 10.0 * knee},
                               inner_spec(opts));
}

/// Log-log table of a positive radial profile on [rho_floor, rho_max].
template <class F>
numerics::LogLogInterpolant tabulate(F&& profile, double rho_max, int per_decade)
{
    rho_max = std::max(rho_max, 10.0 * rho_floor);
    const double decades = std::log10(rho_max / rho_floor);
    const int n = std::max(8, static_cast<int>(std::ceil(decades * per_decade)) + 1);
    std::vector<double> xs(n);
    std::vector<double> ys(n);
    for (int i = 0; i < n; ++i) {
        xs[i] = rho_floor * std::pow(10.0, decades * i / (n - 1));
        ys[i] = std::max(profile(xs[i]), std::numeric_limits<double>::min());
    }
    return numerics::LogLogInterpolant(xs, ys);
}

/// int over |y| <= radius of fn(|y - z|) dy with |z| = l, by symmetry about z.
template <class F>
double disk_integral(F&& fn, double radius, double l, const QuadratureSpec& spec)
{
    auto ring = [&](double r) {
        auto along = [&](double phi) {
            const double rho2 = r * r + l * l - 2.0 * r * l * std::cos(phi);
            return fn(std::sqrt(std::max(0.0, rho2)));
        };
        return 2.0 * r * integrate_1d(along, 0.0, pi, spec);
    };
    return integrate_1d_breaks(ring, 0.0, radius, {l}, spec);
}

/*!
 * exp(-density int (1 - exp(-mean profile(|y - z|))) dy) over the disk of
 * opts.region_radius, for a profile decaying as rho^-(2 alpha2 / alpha1).
 */
template <class F>
CfEvaluation poisson_cluster_cf(F&& profile, double density, double mean, double l,
                                const NetworkParams& params, const AnalyticsOptions& opts,
                                const char* label)
{
    CfEvaluation out;
    if (density == 0.0 || mean == 0.0) {
        return out;
    }
    const double decay = 2.0 * params.alpha2 / params.alpha1;
    double radius = opts.region_radius;
    const bool whole_plane = std::isinf(radius);
    if (whole_plane) {
        if (decay <= 2.0) {
            spdlog::debug("{}: exponent diverges over the plane (alpha2 <= alpha1)", label);
            out.value = 0.0;
            out.tail_exponent = inf;
            return out;
        }
        radius = 50.0 * std::max({params.cluster.reach(), d0_threshold(params), l, 1.0});
    }
    const auto table = tabulate(profile, radius + l, opts.table_points_per_decade);
    auto hole = [&](double rho) { return -std::expm1(-mean * table(rho)); };
    double exponent = density * disk_integral(hole, radius, l, outer_spec(opts));
    if (whole_plane) {
        // Beyond the tabulated radius |y - z| ~ |y| and profile ~ c rho^-decay.
        const double c = profile(radius) * std::pow(radius, decay);
        out.tail_exponent =
            density * mean * 2.0 * pi * c * std::pow(radius, 2.0 - decay) / (decay - 2.0);
        spdlog::debug("{}: tail beyond {:.4g} m adds {:.3e} to the exponent", label, radius,
                      out.tail_exponent);
        exponent += out.tail_exponent;
    }
    out.value = std::exp(-exponent);
    return out;
}

double intra_from_profile(const numerics::LogLogInterpolant& table, double mean, double l,
                          const NetworkParams& params, const AnalyticsOptions& opts)
{
    const ClusterModel& cluster = params.cluster;
    auto ring = [&](double r) {
        auto along = [&](double phi) {
            const double rho2 = r * r + l * l - 2.0 * r * l * std::cos(phi);
            return std::exp(-mean * table(std::sqrt(std::max(0.0, rho2))));
        };
        return 2.0 * r * cluster.radial_pdf(r) * integrate_1d(along, 0.0, pi, outer_spec(opts));
    };
    return integrate_1d_breaks(ring, 0.0, cluster.integration_radius(), {l}, outer_spec(opts));
}

bool trivial_cf(double s, const NetworkParams& params)
{
    return s == 0.0 || !(q_radius(params) > 0.0);
}

double thomas_k(const NetworkParams& params)
{
    return std::pow(std::numbers::sqrt2 * params.cluster.scale(), -params.alpha1);
}

/// Right side constant P_c / ((1 - beta D) eta g).
double chernoff_level(const NetworkParams& params)
{
    const double headroom = 1.0 - params.beta * params.duty;
    return headroom > 0.0 ? params.p_c / (headroom * params.eta * params.g) : inf;
}

/// E[d^-alpha1 exp(-mu d^-alpha1)] for one PB at distance d from the node.
double chernoff_slope(double mu, const NetworkParams& params)
{
    const double half = 0.5 * params.alpha1;
    const QuadratureSpec spec{1e-10, 1e-300, 50};
    if (params.cluster.kind() == ClusterKind::matern) {
        const double a2 = params.cluster.scale() * params.cluster.scale();
        auto integrand = [&](double t) {
            if (t == 0.0) {
                return 0.0;
            }
            const double x = std::pow(t, -half);
            return x * std::exp(-mu * x);
        };
        const double tp = std::pow(mu, 1.0 / half);
        return integrate_1d_breaks(integrand, 0.0, a2, {0.01 * tp, 0.1 * tp, tp, 10.0 * tp, 100.0 * tp}, spec) / a2;
    }
    const double k = thomas_k(params);
    auto integrand = [&](double t) {
        if (t == 0.0) {
            return 0.0;
        }
        const double x = k * std::pow(t, -half);
        return std::exp(-t) * x * std::exp(-mu * x);
    };
    const double tp = std::pow(mu * k, 1.0 / half);
    const double split = std::max(100.0 * tp, 60.0);
    return integrate_1d_breaks(integrand, 0.0, split, {0.01 * tp, 0.1 * tp, tp, 10.0 * tp, 100.0 * tp}, spec)
           + integrate_1d(integrand, split, inf, spec);
}

/// E[1 - exp(-mu d^-alpha1)] (or the printed Thomas variant).
double chernoff_mass(double mu, const NetworkParams& params, ChernoffForm form)
{
    const double half = 0.5 * params.alpha1;
    const QuadratureSpec spec{1e-10, 1e-300, 50};
    if (params.cluster.kind() == ClusterKind::matern) {
        const double a2 = params.cluster.scale() * params.cluster.scale();
        auto integrand = [&](double t) {
            return t == 0.0 ? 1.0 : -std::expm1(-mu * std::pow(t, -half));
        };
        const double tp = std::pow(mu, 1.0 / half);
        return integrate_1d_breaks(integrand, 0.0, a2, {0.01 * tp, 0.1 * tp, tp, 10.0 * tp, 100.0 * tp}, spec) / a2;
    }
    const double k = thomas_k(params);
    const bool printed = form == ChernoffForm::as_printed;
    auto integrand = [&](double t) {
        if (t == 0.0) {
            return 1.0;
        }
        const double x = mu * k * std::pow(t, -half);
        return std::exp(-t) * (printed ? 1.0 - std::exp(-t - x) : -std::expm1(-x));
    };
    const double tp = std::pow(mu * k, 1.0 / half);
    const double split = std::max(100.0 * tp, 60.0);
    return integrate_1d_breaks(integrand, 0.0, split, {0.01 * tp, 0.1 * tp, tp, 10.0 * tp, 100.0 * tp}, spec)
           + integrate_1d(integrand, split, inf, spec);
}

double thomas_capacity(double duty, const NetworkParams& params)
{
    NetworkParams p = params;
    p.duty = duty;
    return capacity_approx(p);
}

}  // namespace

double q_integrand(double s, Point x, Point y, Point z, const NetworkParams& params)
{
    check_s(s);
    const double r = norm(x);
    if (s == 0.0 || r > d0_threshold(params)) {
        return 0.0;
    }
    const double k = inverse_gain(s, params);
    const double d = norm(x + y - z);
    return params.cluster.radial_pdf(r)
           / (1.0 + k * std::pow(r, params.alpha1) * std::pow(d, params.alpha2));
}

double q_integral(double s, Point y, Point z, const NetworkParams& params,
                  const AnalyticsOptions& opts)
{
    check_s(s);
    params.validate();
    return q_radial(s, distance(y, z), params, opts);
}

double intra_cf(double s, Point z, const NetworkParams& params, const AnalyticsOptions& opts)
{
    check_s(s);
    params.validate();
    const double mean = params.c_bar * params.duty;
    if (trivial_cf(s, params) || mean == 0.0) {
        return 1.0;
    }
    const double l = norm(z);
    const auto table =
        tabulate([&](double rho) { return q_radial(s, rho, params, opts); },
                 params.cluster.integration_radius() + l, opts.table_points_per_decade);
    return intra_from_profile(table, mean, l, params, opts);
}

CfEvaluation inter_cf_detailed(double s, Point z, const NetworkParams& params,
                               const AnalyticsOptions& opts)
{
    check_s(s);
    params.validate();
    if (trivial_cf(s, params)) {
        return {};
    }
    return poisson_cluster_cf([&](double rho) { return q_radial(s, rho, params, opts); },
                              params.lambda_pb, params.c_bar * params.duty, norm(z), params, opts,
                              "inter_cf");
}

double inter_cf(double s, Point z, const NetworkParams& params, const AnalyticsOptions& opts)
{
    return inter_cf_detailed(s, z, params, opts).value;
}

double u_integral(double s, double rho, const NetworkParams& params, const AnalyticsOptions& opts)
{
    check_s(s);
    if (!(rho >= 0.0)) {
        throw std::invalid_argument("rho: must be non-negative");
    }
    return u_radial(s, rho, params, opts);
}

CfEvaluation dense_cf_lb_detailed(double s, Point z, const NetworkParams& params,
                                  const AnalyticsOptions& opts)
{
    check_s(s);
    params.validate();
    if (s == 0.0) {
        return {};
    }
    return poisson_cluster_cf([&](double rho) { return u_radial(s, rho, params, opts); },
                              params.lambda_nd * params.duty, params.m_bar, norm(z), params, opts,
                              "dense_cf_lb");
}

double dense_cf_lb(double s, Point z, const NetworkParams& params, const AnalyticsOptions& opts)
{
    return dense_cf_lb_detailed(s, z, params, opts).value;
}

double p0_closed(const NetworkParams& params)
{
    params.validate();
    const double d0 = d0_threshold(params);
    const double scale = params.cluster.scale();
    if (params.cluster.kind() == ClusterKind::matern) {
        return d0 < scale ? 1.0 - (d0 / scale) * (d0 / scale) : 0.0;
    }
    return std::exp(-d0 * d0 / (2.0 * scale * scale));
}

double ccdf_transmit(double tau, const NetworkParams& params)
{
    params.validate();
    const double floor = params.beta * params.gate_threshold();
    if (std::isnan(tau) || tau < floor * (1.0 - 1e-12)) {
        throw std::domain_error("ccdf_transmit: tau below beta P_c / (1 - beta D)");
    }
    const double peak = params.beta * params.eta * params.g;
    if (peak == 0.0) {
        return tau > 0.0 ? 0.0 : 1.0;
    }
    const double scale = params.cluster.scale();
    const double r2 = std::pow(peak / tau, 2.0 / params.alpha1);
    if (params.cluster.kind() == ClusterKind::matern) {
        return tau > peak / std::pow(scale, params.alpha1) ? r2 / (scale * scale) : 1.0;
    }
    return -std::expm1(-r2 / (2.0 * scale * scale));
}

double chernoff_stationarity(double mu, const NetworkParams& params)
{
    params.validate();
    const double level = chernoff_level(params);
    return params.m_bar * chernoff_slope(mu, params) / level - 1.0;
}

double chernoff_log_objective(double mu, const NetworkParams& params, ChernoffForm form)
{
    params.validate();
    return mu * chernoff_level(params) - params.m_bar * chernoff_mass(mu, params, form);
}

ChernoffSolution chernoff_p0_dense(const NetworkParams& params, ChernoffForm form)
{
    params.validate();
    ChernoffSolution out;
    const double level = chernoff_level(params);
    if (params.m_bar == 0.0 || !std::isfinite(level)) {
        return out;
    }
    const auto root = numerics::find_root(
        [&](double mu) { return params.m_bar * chernoff_slope(mu, params) / level - 1.0; },
        numerics::Bracket{}, numerics::RootOptions{1e-10, 300});
    if (!root) {
        return out;
    }
    out.root_found = true;
    out.mu_star = *root;
    out.bound = std::min(1.0, std::exp(chernoff_log_objective(*root, params, form)));
    return out;
}

double coverage_lb_normal(const NetworkParams& params, const AnalyticsOptions& opts)
{
    params.validate();
    if (params.beta <= 0.0) {
        return 0.0;
    }
    const double p0 = p0_closed(params);
    if (p0 >= 1.0) {
        return 0.0;
    }
    const double s = params.coverage_laplace_arg();
    const Point z{params.d2d_dist, 0.0};
    return (1.0 - p0) * intra_cf(s, z, params, opts) * inter_cf(s, z, params, opts);
}

double coverage_lb_dense(const NetworkParams& params, const AnalyticsOptions& opts)
{
    params.validate();
    if (params.beta <= 0.0) {
        return 0.0;
    }
    const double p0 = chernoff_p0_dense(params).bound;
    if (p0 >= 1.0) {
        return 0.0;
    }
    const double s = params.coverage_laplace_arg();
    return (1.0 - p0) * dense_cf_lb(s, Point{params.d2d_dist, 0.0}, params, opts);
}

double micro_pb_power(const NetworkParams& params, MicroPbFormula formula)
{
    params.validate();
    const double scale = params.eta * params.g * params.p_sum;
    const double nu = params.nu;
    const double a1 = params.alpha1;
    const ClusterModel& cluster = params.cluster;
    if (formula == MicroPbFormula::as_printed) {
        if (cluster.kind() == ClusterKind::matern) {
            const double a = cluster.scale();
            return scale / (a * a)
                   * (pi / (a1 - 2.0) * (std::pow(nu, 2.0 - a1) - std::pow(a, 2.0 - a1))
                      + std::pow(nu, 2.0 - a1));
        }
        const double sigma = cluster.scale();
        return scale
               * (std::pow(nu, -a1) * (1.0 - std::exp(-nu))
                  + std::pow(std::numbers::sqrt2 * sigma, -a1)
                        * numerics::upper_incomplete_gamma(1.0 - 0.5 * a1,
                                                           nu * nu / (2.0 * sigma * sigma)));
    }
    auto integrand = [&](double r) {
        return 2.0 * pi * r * cluster.radial_pdf(r) * truncated_path_loss(r, params);
    };
    const QuadratureSpec spec{1e-10, 1e-300, 50};
    return scale * integrate_1d_breaks(integrand, 0.0, cluster.integration_radius(), {nu}, spec);
}

std::string MicroPbReport::describe() const
{
    std::ostringstream os;
    os.precision(10);
    os << "micro-PB received power: as_printed=" << as_printed << " W, rederived=" << rederived
       << " W, abs_diff=" << abs_difference << " W, rel_diff=" << rel_difference;
    return os.str();
}

MicroPbReport micro_pb_discrepancy(const NetworkParams& params)
{
    MicroPbReport r;
    r.as_printed = micro_pb_power(params, MicroPbFormula::as_printed);
    r.rederived = micro_pb_power(params, MicroPbFormula::rederived);
    r.abs_difference = std::fabs(r.as_printed - r.rederived);
    r.rel_difference = r.rederived != 0.0 ? r.abs_difference / std::fabs(r.rederived) : inf;
    return r;
}

double min_sum_power(const NetworkParams& params, MicroPbFormula formula)
{
    params.validate();
    const double headroom = 1.0 - params.beta * params.duty;
    if (headroom <= 0.0) {
        return inf;
    }
    NetworkParams unit = params;
    unit.p_sum = 1.0;
    return params.p_c / (headroom * micro_pb_power(unit, formula));
}

double ps_micro(const NetworkParams& params)
{
    params.validate();
    const double a2 = params.alpha2;
    const double delta = 2.0 / a2;
    return std::exp(-(2.0 * pi * params.duty / a2) * params.lambda_nd
                    * std::pow(params.effective_theta(), delta)
                    * numerics::beta_fn(delta, 1.0 - delta));
}

double capacity_approx(const NetworkParams& params)
{
    params.validate();
    const double density = params.lambda_pb * params.c_bar * params.duty;
    const double d0 = d0_threshold(params);
    const double scale = params.cluster.scale();
    if (params.cluster.kind() == ClusterKind::matern) {
        return density * (d0 / scale) * (d0 / scale);
    }
    return density * -std::expm1(-d0 * d0 / (2.0 * scale * scale));
}

double max_capacity_matern(const NetworkParams& params)
{
    params.validate();
    if (params.cluster.kind() != ClusterKind::matern) {
        throw std::invalid_argument("cluster: the closed-form maximum needs a Matern cluster");
    }
    const double a = params.cluster.scale();
    const double a1 = params.alpha1;
    const double denom = 2.0 + a1 * params.beta;
    return params.lambda_pb * params.c_bar * a1 / (a * a * denom)
           * std::pow(2.0 * params.eta * params.g / (params.p_c * denom), 2.0 / a1);
}

double optimal_duty(const NetworkParams& params, DutyFormula formula)
{
    params.validate();
    const double a1 = params.alpha1;
    const double beta = params.beta;
    if (params.cluster.kind() == ClusterKind::matern) {
        if (formula == DutyFormula::as_printed) {
            return std::min(1.0, a1 / (2.0 + a1 * beta));
        }
        return beta > 0.0 ? std::min(1.0, a1 / (beta * (a1 + 2.0))) : 1.0;
    }
    // Coarse scan for the bracket, then golden-section refinement.
    constexpr int n = 200;
    int best = 1;
    double best_value = -inf;
    for (int i = 1; i <= n; ++i) {
        const double v = thomas_capacity(static_cast<double>(i) / n, params);
        if (v > best_value) {
            best_value = v;
            best = i;
        }
    }
    double lo = static_cast<double>(std::max(best - 1, 0)) / n;
    double hi = static_cast<double>(std::min(best + 1, n)) / n;
    lo = std::max(lo, 1e-12);
    const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
    double x1 = hi - ratio * (hi - lo);
    double x2 = lo + ratio * (hi - lo);
    double f1 = thomas_capacity(x1, params);
    double f2 = thomas_capacity(x2, params);
    while (hi - lo > 1e-10) {
        if (f1 < f2) {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + ratio * (hi - lo);
            f2 = thomas_capacity(x2, params);
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - ratio * (hi - lo);
            f1 = thomas_capacity(x1, params);
        }
    }
    const double mid = 0.5 * (lo + hi);
    return thomas_capacity(1.0, params) >= thomas_capacity(mid, params) ? 1.0 : mid;
}

std::size_t CoverageRegion::count() const
{
    return static_cast<std::size_t>(std::count(inside.begin(), inside.end(), true));
}

CoverageRegion coverage_region(const NetworkParams& params, double epsilon,
                               std::span<const double> betas, std::span<const double> duties,
                               const AnalyticsOptions& opts)
{
    if (!(epsilon >= 0.0 && epsilon <= 1.0)) {
        throw std::invalid_argument("epsilon: must lie in [0, 1]");
    }
    CoverageRegion region;
    region.betas.assign(betas.begin(), betas.end());
    region.duties.assign(duties.begin(), duties.end());
    region.epsilon = epsilon;
    region.inside.reserve(betas.size() * duties.size());
    const Point z{params.d2d_dist, 0.0};
    for (double beta : betas) {
        for (double duty : duties) {
            NetworkParams p = params;
            p.beta = beta;
            p.duty = duty;
            bool in = epsilon >= 1.0;
            if (!in) {
                const double s = p.coverage_laplace_arg();
                const double c = intra_cf(s, z, p, opts) * inter_cf(s, z, p, opts);
                in = c >= 1.0 - epsilon;
            }
            region.inside.push_back(in);
        }
    }
    return region;
}

}  // namespace backcom::analytics
