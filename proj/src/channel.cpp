#include "backcom/channel.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

namespace backcom {

namespace {

void require(bool ok, const char* field, const std::string& what)
{
    if (!ok) {
        throw std::invalid_argument(std::string(field) + ": " + what);
    }
}

bool positive(double v) { return v > 0.0 && std::isfinite(v); }
bool non_negative(double v) { return v >= 0.0 && std::isfinite(v); }

}  // namespace

void NetworkParams::validate() const
{
    require(non_negative(lambda_pb), "lambda_pb", "must be non-negative");
    require(non_negative(c_bar), "c_bar", "must be non-negative");
    require(non_negative(lambda_nd), "lambda_nd", "must be non-negative");
    require(non_negative(m_bar), "m_bar", "must be non-negative");
    require(positive(eta), "eta", "must be positive");
    require(positive(g), "g", "must be positive");
    require(alpha1 > 2.0 && std::isfinite(alpha1), "alpha1", "must exceed 2");
    require(alpha2 > 2.0 && std::isfinite(alpha2), "alpha2", "must exceed 2");
    require(beta >= 0.0 && beta <= 1.0, "beta", "must lie in [0, 1]");
    require(duty > 0.0 && duty <= 1.0, "duty", "must lie in (0, 1]");
    require(beta * duty <= 1.0, "beta", "beta * duty must not exceed 1");
    require(positive(p_c), "p_c", "must be positive");
    require(positive(theta), "theta", "must be positive");
    require(positive(d2d_dist), "d2d_dist", "must be positive");
    require(non_negative(noise), "noise", "must be non-negative");
    require(positive(nu), "nu", "must be positive");
    require(positive(p_sum), "p_sum", "must be positive");
    require(non_negative(guard_width), "guard_width", "must be non-negative");
}

double NetworkParams::gate_threshold() const
{
    const double headroom = 1.0 - beta * duty;
    if (headroom <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return p_c / headroom;
}

double NetworkParams::coverage_laplace_arg() const
{
    if (beta <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    return effective_theta() * (1.0 - beta * duty) / (beta * p_c);
}

double received_power_normal(Point node, Point pb, const NetworkParams& params)
{
    const double d2 = squared_norm(node - pb);
    if (d2 == 0.0) {
        throw std::domain_error("received_power_normal: node and PB are co-located");
    }
    return params.eta * params.g * inverse_power_from_squared(d2, params.alpha1);
}

double received_power_dense(Point node, std::span<const Point> pbs, const NetworkParams& params)
{
    if (pbs.empty()) {
        throw std::invalid_argument("received_power_dense: empty PB set");
    }
    double sum = 0.0;
    for (const Point& pb : pbs) {
        const double d2 = squared_norm(node - pb);
        if (d2 == 0.0) {
            throw std::domain_error("received_power_dense: node and PB are co-located");
        }
        sum += inverse_power_from_squared(d2, params.alpha1);
    }
    return params.eta * params.g * sum;
}

double circuit_gate(double p_in, const NetworkParams& params)
{
    if (!(p_in >= 0.0)) {
        throw std::invalid_argument("circuit_gate: negative input power");
    }
    return p_in >= params.gate_threshold() ? p_in : 0.0;
}

double transmit_power(double p_in, const NetworkParams& params)
{
    return params.beta * circuit_gate(p_in, params);
}

double d0_threshold(const NetworkParams& params)
{
    if (params.p_c <= 0.0) {
        return std::numeric_limits<double>::infinity();
    }
    const double headroom = std::max(0.0, 1.0 - params.beta * params.duty);
    return std::pow(params.eta * params.g * headroom / params.p_c, 1.0 / params.alpha1);
}

double truncated_path_loss(double dist, const NetworkParams& params)
{
    return std::pow(std::max(params.nu, dist), -params.alpha1);
}

}  // namespace backcom
