#pragma once

#include <span>

#include "backcom/geometry.hpp"
#include "backcom/params.hpp"
#include "backcom/random.hpp"

namespace backcom {

/// eta g |node - pb|^-alpha1. Throws std::domain_error for co-located points.
double received_power_normal(Point node, Point pb, const NetworkParams& params);

/// eta g sum_Y |node - Y|^-alpha1 over a non-empty PB set.
double received_power_dense(Point node, std::span<const Point> pbs, const NetworkParams& params);

/// l(p): p if the circuit-power constraint p >= P_c / (1 - beta D) holds, else 0.
double circuit_gate(double p_in, const NetworkParams& params);

/// beta l(p): backscattered power.
double transmit_power(double p_in, const NetworkParams& params);

/// PB-node separation [eta g (1 - beta D) / P_c]^(1/alpha1) beyond which the
/// gate is closed. +infinity when P_c = 0.
double d0_threshold(const NetworkParams& params);

/// [max(nu, dist)]^-alpha1.
double truncated_path_loss(double dist, const NetworkParams& params);

/// Rayleigh power fading, h ~ Exp(1).
inline double sample_fading(Rng& rng) noexcept { return rng.exponential(); }

/// d^-alpha computed from d^2; exact fast paths for alpha in {2, 3, 4}.
inline double inverse_power_from_squared(double dist2, double alpha) noexcept
{
    if (alpha == 3.0) {
        return 1.0 / (dist2 * std::sqrt(dist2));
    }
    if (alpha == 2.0) {
        return 1.0 / dist2;
    }
    if (alpha == 4.0) {
        return 1.0 / (dist2 * dist2);
    }
    return std::pow(dist2, -0.5 * alpha);
}

/// d^alpha computed from d^2.
inline double power_from_squared(double dist2, double alpha) noexcept
{
    if (alpha == 3.0) {
        return dist2 * std::sqrt(dist2);
    }
    if (alpha == 2.0) {
        return dist2;
    }
    if (alpha == 4.0) {
        return dist2 * dist2;
    }
    return std::pow(dist2, 0.5 * alpha);
}

}  // namespace backcom
