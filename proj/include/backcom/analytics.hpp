#pragma once

#include <limits>
#include <span>
#include <string>
#include <vector>

#include "backcom/geometry.hpp"
#include "backcom/params.hpp"

namespace backcom::analytics {

struct AnalyticsOptions
{
    double inner_tol = 1e-6;  ///< relative tolerance of inner integrals (q, u)
    double outer_tol = 1e-5;  ///< relative tolerance of outer integrals
    /// Radius of the disk, centred at the typical node, that holds the
    /// interfering cluster centres: PBs in the normal model, nodes in the dense
    /// model. Infinity means the whole plane.
    double region_radius = std::numeric_limits<double>::infinity();
    /// Density of the log-spaced table of q (resp. u) against |y - z|.
    int table_points_per_decade = 24;
};

/// Integral of f(|x|) / (1 + (s beta eta g)^-1 |x|^alpha1 |x + y - z|^alpha2)
/// over the disk |x| <= d0. s = +inf is accepted (the integrand becomes f).
double q_integral(double s, Point y, Point z, const NetworkParams& params,
                  const AnalyticsOptions& opts = {});

/// The same integrand evaluated at one point x; exposed for checks.
double q_integrand(double s, Point x, Point y, Point z, const NetworkParams& params);

/// Laplace functional of the intra-cluster interference at receiver z.
double intra_cf(double s, Point z, const NetworkParams& params, const AnalyticsOptions& opts = {});

struct CfEvaluation
{
    double value = 1.0;
    /// Estimated contribution of the region beyond the tabulated radius to the
    /// exponent (0 for a finite region).
    double tail_exponent = 0.0;
};

/// Laplace functional of the inter-cluster interference at receiver z.
CfEvaluation inter_cf_detailed(double s, Point z, const NetworkParams& params,
                               const AnalyticsOptions& opts = {});
double inter_cf(double s, Point z, const NetworkParams& params, const AnalyticsOptions& opts = {});

/// 2 pi int f(r) r / (1 + (s beta eta g)^-1 r^alpha1 rho^alpha2) dr.
double u_integral(double s, double rho, const NetworkParams& params,
                  const AnalyticsOptions& opts = {});

/// Lower bound on the Laplace functional of the dense-model interference,
/// obtained by ignoring the circuit gate of the interferers.
CfEvaluation dense_cf_lb_detailed(double s, Point z, const NetworkParams& params,
                                  const AnalyticsOptions& opts = {});
double dense_cf_lb(double s, Point z, const NetworkParams& params,
                   const AnalyticsOptions& opts = {});

/// Exact power-outage probability of the normal model.
double p0_closed(const NetworkParams& params);

/// P(P_t >= tau) for tau >= beta P_c / (1 - beta D); throws std::domain_error below.
double ccdf_transmit(double tau, const NetworkParams& params);

/*!
 * Thomas bound integrand. rederived: e^-t (1 - e^{-mu k t^{-alpha1/2}}), the
 * form that is consistent with the stationarity equation. as_printed keeps the
 * extra -t inside the inner exponent.
 */
enum class ChernoffForm { rederived, as_printed };

struct ChernoffSolution
{
    double mu_star = 0.0;
    double bound = 1.0;
    bool root_found = false;
};

/// Left side of the stationarity equation divided by its right side, minus 1.
/// Strictly decreasing in mu; zero at mu*.
double chernoff_stationarity(double mu, const NetworkParams& params);

/// Logarithm of the Chernoff objective E[exp(-mu S)] exp(mu c), convex in mu.
double chernoff_log_objective(double mu, const NetworkParams& params,
                              ChernoffForm form = ChernoffForm::rederived);

/// Chernoff upper bound on the dense-model power-outage probability.
ChernoffSolution chernoff_p0_dense(const NetworkParams& params,
                                   ChernoffForm form = ChernoffForm::rederived);

/// (1 - p0) C_a(s0) C_b(s0) at s0 = theta_eff (1 - beta D) / (beta P_c).
double coverage_lb_normal(const NetworkParams& params, const AnalyticsOptions& opts = {});

/// (1 - Chernoff bound) times the dense Laplace lower bound at s0.
double coverage_lb_dense(const NetworkParams& params, const AnalyticsOptions& opts = {});

enum class MicroPbFormula { as_printed, rederived };

/// Limit of the typical node's received power with dense micro-PBs.
double micro_pb_power(const NetworkParams& params, MicroPbFormula formula);

struct MicroPbReport
{
    double as_printed = 0.0;
    double rederived = 0.0;
    double abs_difference = 0.0;
    double rel_difference = 0.0;

    std::string describe() const;
};

MicroPbReport micro_pb_discrepancy(const NetworkParams& params);

/// Smallest p_sum that keeps the gate open in the micro-PB limit.
double min_sum_power(const NetworkParams& params,
                     MicroPbFormula formula = MicroPbFormula::rederived);

/// MANET success probability with constant transmit power.
double ps_micro(const NetworkParams& params);

/// Capacity in the almost-full-coverage regime, lambda_pb c D (1 - p0), with
/// the closed-form (1 - p0) of each cluster model taken literally (for Matern
/// this is (d0 / a)^2 without clamping at 1).
double capacity_approx(const NetworkParams& params);

/// Maximum of the Matern capacity over D as given in closed form, i.e. the
/// capacity evaluated at the closed-form optimiser alpha1 / (2 + alpha1 beta).
double max_capacity_matern(const NetworkParams& params);

/*!
 * as_printed: D* = min(1, alpha1 / (2 + alpha1 beta)).
 * rederived: stationary point of D (1 - beta D)^(2 / alpha1), min(1, alpha1 / (beta (alpha1 + 2))).
 */
enum class DutyFormula { as_printed, rederived };

/// Matern: the closed form selected by formula. Thomas: numerical maximiser of
/// capacity_approx over D in (0, 1] (formula ignored).
double optimal_duty(const NetworkParams& params, DutyFormula formula = DutyFormula::as_printed);

struct CoverageRegion
{
    std::vector<double> betas;
    std::vector<double> duties;
    double epsilon = 0.0;
    /// inside[i * duties.size() + j] for (betas[i], duties[j]).
    std::vector<bool> inside;

    bool contains(std::size_t beta_index, std::size_t duty_index) const
    {
        return inside.at(beta_index * duties.size() + duty_index);
    }
    std::size_t count() const;
};

/// Grid cells with C_a(s0) C_b(s0) >= 1 - epsilon.
CoverageRegion coverage_region(const NetworkParams& params, double epsilon,
                               std::span<const double> betas, std::span<const double> duties,
                               const AnalyticsOptions& opts = {});

}  // namespace backcom::analytics
