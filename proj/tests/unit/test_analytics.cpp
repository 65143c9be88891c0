#include <cmath>
#include <numbers>
#include <vector>

#include <gtest/gtest.h>

#include "backcom/analytics.hpp"
#include "backcom/channel.hpp"
#include "backcom/numerics.hpp"

using namespace backcom;
using namespace backcom::analytics;

namespace {

constexpr double pi = std::numbers::pi;

NetworkParams matern_params()
{
    NetworkParams p;
    p.cluster = ClusterModel::matern(10.0);
    return p;
}

/// Gamma(1/2 - k, x) by downward recurrence from sqrt(pi) erfc(sqrt(x)).
double gamma_half_minus(int k, double x)
{
    double g = std::sqrt(pi) * std::erfc(std::sqrt(x));
    double a = 0.5;
    for (int i = 0; i < k; ++i) {
        a -= 1.0;
        g = (g - std::pow(x, a) * std::exp(-x)) / a;
    }
    return g;
}

AnalyticsOptions finite_region(double radius)
{
    AnalyticsOptions opts;
    opts.region_radius = radius;
    return opts;
}

}  // namespace

TEST(QIntegral, ZeroArgument)
{
    const NetworkParams p;
    EXPECT_EQ(q_integral(0.0, {3.0, 0.0}, {1.0, 0.0}, p), 0.0);
    EXPECT_THROW(q_integral(-1.0, {}, {}, p), std::invalid_argument);
}

TEST(QIntegral, IntegrandPointCheck)
{
    const NetworkParams p;
    const double s = 80.0;
    const Point x{1.2, -0.7};
    const Point y{4.0, 2.5};
    const Point z{0.6, 0.8};
    const double k = 1.0 / (s * p.beta * p.eta * p.g);
    const double r = std::hypot(1.2, -0.7);
    const double d = std::hypot(1.2 + 4.0 - 0.6, -0.7 + 2.5 - 0.8);
    const double f = std::exp(-r * r / 8.0) / (8.0 * pi);
    const double expected = f / (1.0 + k * std::pow(r, 3.0) * std::pow(d, 3.0));
    EXPECT_NEAR(q_integrand(s, x, y, z, p), expected, 1e-12 * expected);
    EXPECT_EQ(q_integrand(s, {20.0, 0.0}, y, z, p), 0.0);
}

TEST(QIntegral, AgainstPlainPolarQuadrature)
{
    // Direct 2D quadrature of the integrand, centred at the origin, with no
    // change of variables.
    for (const NetworkParams& p : {NetworkParams{}, matern_params()}) {
        for (double s : {0.8, 80.0}) {
            const Point y{3.0, 1.0};
            const Point z{1.0, 0.0};
            const double r_max = std::min(d0_threshold(p), p.cluster.integration_radius());
            const double direct = numerics::integrate_polar(
                [&](double r, double phi) {
                    return q_integrand(s, Point{r * std::cos(phi), r * std::sin(phi)}, y, z, p);
                },
                r_max, {1e-9, 1e-300, 40});
            const double q = q_integral(s, y, z, p);
            EXPECT_NEAR(q, direct, 1e-5 * direct) << "s=" << s;
        }
    }
}

TEST(QIntegral, BoundedByClusterMass)
{
    const NetworkParams p;
    const double mass = p.cluster.radial_cdf(d0_threshold(p));
    for (double s : {1e-3, 1.0, 1e3, 1e6}) {
        for (double yx : {0.01, 1.0, 5.0, 40.0}) {
            const double q = q_integral(s, {yx, 0.0}, {1.0, 0.0}, p);
            EXPECT_GE(q, 0.0);
            EXPECT_LE(q, mass * (1.0 + 1e-6));
        }
    }
    EXPECT_NEAR(q_integral(std::numeric_limits<double>::infinity(), {2.0, 0.0}, {}, p), mass,
                1e-6);
}

TEST(IntraCf, Trivial)
{
    NetworkParams p;
    EXPECT_EQ(intra_cf(0.0, {1.0, 0.0}, p), 1.0);
    p.c_bar = 0.0;
    EXPECT_EQ(intra_cf(100.0, {1.0, 0.0}, p), 1.0);
}

TEST(IntraCf, DirectionInvariant)
{
    const NetworkParams p;
    const double s = p.coverage_laplace_arg();
    const double ref = intra_cf(s, {1.0, 0.0}, p);
    for (int k = 1; k < 8; ++k) {
        const double phi = k * pi / 4.0;
        EXPECT_NEAR(intra_cf(s, {std::cos(phi), std::sin(phi)}, p), ref, 1e-9);
    }
}

TEST(InterCf, Trivial)
{
    NetworkParams p;
    EXPECT_EQ(inter_cf(0.0, {1.0, 0.0}, p), 1.0);
    p.lambda_pb = 0.0;
    EXPECT_EQ(inter_cf(50.0, {1.0, 0.0}, p), 1.0);
}

TEST(InterCf, WholePlaneDivergesWhenDecayIsSlow)
{
    // alpha1 = alpha2: the integrand of the exponent decays as |y|^-2.
    const NetworkParams p;
    EXPECT_EQ(inter_cf(1.0, {1.0, 0.0}, p), 0.0);
    EXPECT_GT(inter_cf(1.0, {1.0, 0.0}, p, finite_region(50.0)), 0.0);
}

TEST(InterCf, WholePlaneTailConverges)
{
    // alpha2 > alpha1: the exponent integrand decays as |y|^-(2 alpha2 / alpha1), so the
    // exponent over a disk of radius R approaches its limit as E - c R^(2 - 2 alpha2 / alpha1).
    // Two finite radii then predict the whole-plane value.
    NetworkParams p;
    p.alpha2 = 4.0;
    const double s = 0.1 * p.coverage_laplace_arg();
    const double e1 = -std::log(inter_cf(s, {1.0, 0.0}, p, finite_region(300.0)));
    const double e2 = -std::log(inter_cf(s, {1.0, 0.0}, p, finite_region(600.0)));
    const CfEvaluation plane = inter_cf_detailed(s, {1.0, 0.0}, p);
    const double shrink = std::pow(2.0, 2.0 - 2.0 * p.alpha2 / p.alpha1);
    const double predicted = e2 + (e2 - e1) * shrink / (1.0 - shrink);
    EXPECT_GT(e2, e1);
    EXPECT_NEAR(-std::log(plane.value), predicted, 0.01 * predicted);
    EXPECT_GT(plane.tail_exponent, 0.0);
}

TEST(InterCf, CompletelyMonotoneCheckpoints)
{
    const NetworkParams p;
    const AnalyticsOptions opts = finite_region(70.0);
    double prev_a = 1.0;
    double prev_b = 1.0;
    double prev_d = 1.0;
    for (double s : {0.01, 0.1, 1.0, 10.0, 100.0, 1000.0}) {
        const double a = intra_cf(s, {1.0, 0.0}, p, opts);
        const double b = inter_cf(s, {1.0, 0.0}, p, opts);
        const double d = dense_cf_lb(s, {1.0, 0.0}, p, opts);
        for (double v : {a, b, d}) {
            EXPECT_GE(v, 0.0);
            EXPECT_LE(v, 1.0);
        }
        EXPECT_LE(a, prev_a + 1e-9);
        EXPECT_LE(b, prev_b + 1e-9);
        EXPECT_LE(d, prev_d + 1e-9);
        prev_a = a;
        prev_b = b;
        prev_d = d;
    }
}

TEST(DenseCf, Trivial)
{
    NetworkParams p;
    EXPECT_EQ(dense_cf_lb(0.0, {1.0, 0.0}, p), 1.0);
    p.m_bar = 1e-12;
    EXPECT_NEAR(dense_cf_lb(10.0, {1.0, 0.0}, p, finite_region(60.0)), 1.0, 1e-9);
}

TEST(UIntegral, MatchesDirectQuadrature)
{
    const NetworkParams p;
    const double s = 5.0;
    const double rho = 3.0;
    const double k = 1.0 / (s * p.beta * p.eta * p.g);
    const double direct = numerics::integrate_1d(
        [&](double r) {
            return 2.0 * pi * r * p.cluster.radial_pdf(r)
                   / (1.0 + k * std::pow(r, p.alpha1) * std::pow(rho, p.alpha2));
        },
        0.0, 40.0, {1e-10, 1e-300, 50});
    EXPECT_NEAR(u_integral(s, rho, p), direct, 1e-6 * direct);
    EXPECT_EQ(u_integral(0.0, rho, p), 0.0);
}

TEST(P0Closed, Values)
{
    NetworkParams p;
    const double d0 = d0_threshold(p);
    EXPECT_NEAR(p0_closed(p), std::exp(-d0 * d0 / 8.0), 1e-20);
    EXPECT_NEAR(p0_closed(p), 6.8e-8, 0.1e-8);
    EXPECT_EQ(p0_closed(matern_params()), 0.0);
    p.cluster = ClusterModel::matern(15.0);
    EXPECT_NEAR(p0_closed(p), 1.0 - d0 * d0 / 225.0, 1e-14);
    p.beta = 1.0;
    p.duty = 1.0;
    EXPECT_EQ(p0_closed(p), 1.0);
}

TEST(CcdfTransmit, ThomasValue)
{
    const NetworkParams p;
    EXPECT_NEAR(ccdf_transmit(1.0, p), 1.0 - std::exp(-std::pow(6.0, 2.0 / 3.0) / 8.0), 1e-14);
    EXPECT_NEAR(ccdf_transmit(1.0, p), 0.3383, 1e-3);
    EXPECT_THROW(ccdf_transmit(1e-6, p), std::domain_error);
}

TEST(CcdfTransmit, MonotoneAndContinuous)
{
    for (const NetworkParams& p : {NetworkParams{}, matern_params()}) {
        const double floor = p.beta * p.gate_threshold();
        double previous = 1.0;
        for (double tau = floor; tau < 10.0; tau *= 1.3) {
            const double f = ccdf_transmit(tau, p);
            EXPECT_LE(f, previous + 1e-15);
            previous = f;
        }
    }
    const NetworkParams m = matern_params();
    const double branch = m.beta * m.eta * m.g / std::pow(10.0, m.alpha1);
    EXPECT_NEAR(ccdf_transmit(branch * (1.0 + 1e-12), m), ccdf_transmit(branch, m), 1e-9);
    EXPECT_EQ(ccdf_transmit(branch, m), 1.0);
}

TEST(Chernoff, MaternSlopeAgainstIncompleteGamma)
{
    // E[d^-a exp(-mu d^-a)] for d uniform on the disk of radius a_m
    // = (1 / a_m^2)(2 / a) mu^(2/a - 1) Gamma(1 - 2/a, mu a_m^-a).
    NetworkParams p = matern_params();
    const double level = p.p_c / ((1.0 - p.beta * p.duty) * p.eta * p.g);
    for (double mu : {1.0, 50.0, 800.0}) {
        const double delta = 2.0 / p.alpha1;
        const double slope = delta * std::pow(mu, delta - 1.0)
                             * numerics::upper_incomplete_gamma(1.0 - delta, mu / 1000.0) / 100.0;
        EXPECT_NEAR(chernoff_stationarity(mu, p) + 1.0, p.m_bar * slope / level,
                    1e-7 * p.m_bar * slope / level);
    }
}

TEST(Chernoff, StationarityIsDerivativeOfObjective)
{
    for (const NetworkParams& p : {NetworkParams{}, matern_params()}) {
        const double level = p.p_c / ((1.0 - p.beta * p.duty) * p.eta * p.g);
        for (double mu : {5.0, 200.0, 3000.0}) {
            const double h = 1e-4 * mu;
            const double derivative =
                (chernoff_log_objective(mu + h, p) - chernoff_log_objective(mu - h, p)) / (2 * h);
            EXPECT_NEAR(derivative, -level * chernoff_stationarity(mu, p),
                        1e-5 * std::fabs(level) + 1e-6 * std::fabs(derivative));
        }
    }
}

TEST(Chernoff, ObjectiveConvexAndStationarityDecreasing)
{
    const NetworkParams p;
    double previous = std::numeric_limits<double>::infinity();
    for (double mu = 1.0; mu < 1e5; mu *= 1.5) {
        const double g = chernoff_stationarity(mu, p);
        // Saturates at -1 once the slope underflows.
        EXPECT_TRUE(g < previous || g == -1.0) << mu;
        previous = g;
        const double h = 0.05 * mu;
        const double second = chernoff_log_objective(mu + h, p) - 2.0 * chernoff_log_objective(mu, p)
                              + chernoff_log_objective(mu - h, p);
        EXPECT_GT(second, -1e-12);
    }
}

TEST(Chernoff, SolutionProperties)
{
    NetworkParams p;
    const ChernoffSolution sol = chernoff_p0_dense(p);
    ASSERT_TRUE(sol.root_found);
    EXPECT_GT(sol.mu_star, 0.0);
    EXPECT_NEAR(chernoff_stationarity(sol.mu_star, p), 0.0, 1e-7);
    EXPECT_GT(sol.bound, 0.0);
    EXPECT_LE(sol.bound, 1.0);
    // The bound is the minimum of the objective.
    for (double f : {0.5, 0.9, 1.1, 2.0}) {
        EXPECT_GE(chernoff_log_objective(f * sol.mu_star, p),
                  chernoff_log_objective(sol.mu_star, p));
    }
    const ChernoffSolution printed = chernoff_p0_dense(p, ChernoffForm::as_printed);
    EXPECT_EQ(printed.mu_star, sol.mu_star);
}

TEST(Chernoff, NonincreasingInClusterSize)
{
    NetworkParams p;
    double previous = 1.0;
    for (int m = 1; m <= 10; ++m) {
        p.m_bar = m;
        const double b = chernoff_p0_dense(p).bound;
        EXPECT_LE(b, previous + 1e-12) << "m_bar=" << m;
        previous = b;
    }
}

TEST(Chernoff, UnreachableLevel)
{
    NetworkParams p;
    p.beta = 1.0;
    p.duty = 1.0;
    EXPECT_EQ(chernoff_p0_dense(p).bound, 1.0);
    p = NetworkParams{};
    p.m_bar = 0.0;
    EXPECT_EQ(chernoff_p0_dense(p).bound, 1.0);
}

TEST(CoverageLower, Limits)
{
    NetworkParams p;
    p.beta = 1.0;
    p.duty = 1.0;
    EXPECT_EQ(coverage_lb_normal(p), 0.0);
    EXPECT_EQ(coverage_lb_dense(p), 0.0);
    p = NetworkParams{};
    p.theta = 1e-14;
    const AnalyticsOptions opts = finite_region(70.0);
    EXPECT_NEAR(coverage_lb_normal(p, opts), 1.0 - p0_closed(p), 1e-3);
    p.m_bar = 40.0;
    EXPECT_NEAR(coverage_lb_dense(p, opts), 1.0, 1e-3);
}

TEST(MicroPb, MaternRederivedClosedForm)
{
    NetworkParams p = matern_params();
    p.nu = 0.5;
    const double a = 10.0;
    const double nu = 0.5;
    const double expected = p.eta * p.g * p.p_sum / (a * a)
                            * (nu * nu * std::pow(nu, -3.0) + 2.0 * (1.0 / nu - 1.0 / a));
    EXPECT_NEAR(micro_pb_power(p, MicroPbFormula::rederived), expected, 1e-9 * expected);
    const double printed = p.eta * p.g * p.p_sum / (a * a)
                           * (pi * (1.0 / nu - 1.0 / a) + nu * nu * std::pow(nu, -3.0));
    EXPECT_NEAR(micro_pb_power(p, MicroPbFormula::as_printed), printed, 1e-12 * printed);
}

TEST(MicroPb, ThomasRederivedClosedForm)
{
    NetworkParams p;
    const double sigma2 = 4.0;
    const double x = p.nu * p.nu / (2.0 * sigma2);
    const double expected =
        p.eta * p.g * p.p_sum
        * (std::pow(p.nu, -3.0) * -std::expm1(-x) + std::pow(2.0 * sigma2, -1.5) * gamma_half_minus(1, x));
    EXPECT_NEAR(micro_pb_power(p, MicroPbFormula::rederived), expected, 1e-8 * expected);
}

TEST(MicroPb, DiscrepancyReport)
{
    const NetworkParams p;
    const MicroPbReport r = micro_pb_discrepancy(p);
    EXPECT_GT(r.rel_difference, 0.0);
    EXPECT_NEAR(r.abs_difference, std::fabs(r.as_printed - r.rederived), 1e-12);
    const std::string text = r.describe();
    EXPECT_NE(text.find("as_printed"), std::string::npos);
    EXPECT_NE(text.find("rederived"), std::string::npos);
}

TEST(MinSumPower, Scaling)
{
    NetworkParams p;
    const double base = min_sum_power(p);
    NetworkParams unit = p;
    unit.p_sum = 1.0;
    EXPECT_NEAR(base, p.gate_threshold() / micro_pb_power(unit, MicroPbFormula::rederived),
                1e-12 * base);
    p.p_c *= 2.0;
    EXPECT_NEAR(min_sum_power(p), 2.0 * base, 1e-12 * base);
    p = NetworkParams{};
    p.beta = 0.0;
    EXPECT_NEAR(min_sum_power(p) / base, 1.0 - 0.24, 1e-12);
    p.beta = 1.0;
    p.duty = 1.0;
    EXPECT_TRUE(std::isinf(min_sum_power(p)));
}

TEST(PsMicro, Values)
{
    NetworkParams p;
    p.duty = 0.4;
    p.lambda_nd = 0.01;
    p.theta = 0.31623;
    p.alpha2 = 3.0;
    const double expected =
        std::exp(-(2.0 * pi * 0.4 / 3.0) * 0.01 * std::pow(0.31623, 2.0 / 3.0) * 2.0 * pi
                 / std::sqrt(3.0));
    EXPECT_NEAR(ps_micro(p), expected, 1e-12);
    EXPECT_NEAR(ps_micro(p), 0.9860, 1e-4);
    p.lambda_nd = 0.0;
    EXPECT_EQ(ps_micro(p), 1.0);
}

TEST(Capacity, MaternDefaults)
{
    const NetworkParams p = matern_params();
    const double expected = 0.2 * 3.0 * 0.4 / 100.0 * std::pow(1516.4, 2.0 / 3.0);
    EXPECT_NEAR(capacity_approx(p), expected, 1e-4);
    EXPECT_NEAR(capacity_approx(p), 0.3168, 1e-3);
}

TEST(Capacity, ThomasForm)
{
    const NetworkParams p;
    const double d0 = d0_threshold(p);
    EXPECT_NEAR(capacity_approx(p), 0.24 * (1.0 - std::exp(-d0 * d0 / 8.0)), 1e-14);
}

TEST(OptimalDuty, MaternClosedForms)
{
    const NetworkParams p = matern_params();
    EXPECT_NEAR(optimal_duty(p, DutyFormula::as_printed), 3.0 / 3.8, 1e-12);
    EXPECT_NEAR(optimal_duty(p, DutyFormula::as_printed), 0.78947, 1e-5);
    EXPECT_NEAR(optimal_duty(p, DutyFormula::rederived), 1.0, 1e-12);
    NetworkParams q = p;
    q.beta = 0.9;
    // Interior stationary point alpha / (beta (alpha + 2)) = 2/3.
    EXPECT_NEAR(optimal_duty(q, DutyFormula::rederived), 2.0 / 3.0, 1e-12);
}

TEST(OptimalDuty, RederivedFormMaximisesCapacity)
{
    NetworkParams p = matern_params();
    p.beta = 0.9;
    double best = 0.0;
    double best_d = 0.0;
    for (int i = 1; i <= 1000; ++i) {
        NetworkParams q = p;
        q.duty = i * 1e-3;
        if (capacity_approx(q) > best) {
            best = capacity_approx(q);
            best_d = q.duty;
        }
    }
    EXPECT_NEAR(best_d, optimal_duty(p, DutyFormula::rederived), 1e-3);
}

TEST(OptimalDuty, ThomasNumeric)
{
    NetworkParams p;
    p.cluster = ClusterModel::thomas(5.0);
    double best = 0.0;
    double best_d = 0.0;
    for (int i = 1; i <= 10000; ++i) {
        NetworkParams q = p;
        q.duty = i * 1e-4;
        if (capacity_approx(q) > best) {
            best = capacity_approx(q);
            best_d = q.duty;
        }
    }
    EXPECT_NEAR(optimal_duty(p), best_d, 2e-4);
    EXPECT_THROW(max_capacity_matern(p), std::invalid_argument);
}

TEST(MaxCapacity, EqualsCapacityAtClosedFormDuty)
{
    NetworkParams p = matern_params();
    p.duty = optimal_duty(p, DutyFormula::as_printed);
    EXPECT_NEAR(max_capacity_matern(p), capacity_approx(p), 1e-12 * capacity_approx(p));
}

TEST(CoverageRegion, EpsilonMonotone)
{
    NetworkParams p;
    p.alpha2 = 4.0;
    const std::vector<double> betas = {0.2, 0.6, 1.0};
    const std::vector<double> duties = {0.2, 0.6};
    const AnalyticsOptions opts = finite_region(70.0);
    EXPECT_EQ(coverage_region(p, 1.0, betas, duties, opts).count(), 6U);
    std::size_t previous = 0;
    std::vector<bool> previous_cells(6, false);
    for (double eps : {0.01, 0.05, 0.1}) {
        const CoverageRegion r = coverage_region(p, eps, betas, duties, opts);
        EXPECT_GE(r.count(), previous);
        for (std::size_t i = 0; i < 6; ++i) {
            EXPECT_TRUE(!previous_cells[i] || r.inside[i]);
        }
        previous = r.count();
        previous_cells = r.inside;
    }
    EXPECT_EQ(coverage_region(p, 0.0, betas, duties, opts).count(), 0U);
    EXPECT_THROW(coverage_region(p, -0.1, betas, duties, opts), std::invalid_argument);
}
