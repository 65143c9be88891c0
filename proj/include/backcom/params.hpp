#pragma once

#include <cmath>

#include "backcom/geometry.hpp"

namespace backcom {

inline double dbm_to_watts(double dbm) { return std::pow(10.0, (dbm - 30.0) / 10.0); }
inline double watts_to_dbm(double watts) { return 10.0 * std::log10(watts) + 30.0; }
inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
inline double linear_to_db(double value) { return 10.0 * std::log10(value); }

/*!
 * Scalar model parameters, all in linear SI units.
 *
 * Defaults reproduce the reference operating point: 40 dBm per-node PB power,
 * 7 dBm circuit power, -5 dB SIR threshold, alpha1 = alpha2 = 3, beta = 0.6,
 * D = 0.4, 0.2 PBs/m^2 with 3 nodes per cluster, Thomas clusters with
 * sigma^2 = 4 and 1 m D2D links.
 */
struct NetworkParams
{
    double lambda_pb = 0.2;   ///< PB density (normal model), 1/m^2
    double c_bar = 3.0;       ///< mean transmitting nodes per PB cluster
    double lambda_nd = 0.2;   ///< transmitting-node density (dense model), 1/m^2
    double m_bar = 3.0;       ///< mean PBs per node cluster (dense model)
    double eta = 10.0;        ///< PB transmit power per served node, W
    double g = 1.0;           ///< beamforming gain
    double alpha1 = 3.0;      ///< WPT path-loss exponent
    double alpha2 = 3.0;      ///< D2D path-loss exponent
    double beta = 0.6;        ///< reflection coefficient
    double duty = 0.4;        ///< backscatter duty cycle D = 1/M
    double p_c = dbm_to_watts(7.0);        ///< circuit power, W
    double theta = db_to_linear(-5.0);     ///< SIR threshold (linear)
    double d2d_dist = 1.0;    ///< D2D link length, m
    double noise = 0.0;       ///< receiver noise power, W
    double nu = 0.5;          ///< truncation radius of the micro-PB path loss, m
    double p_sum = 1.0;       ///< per-cluster sum PB power (micro-PB model), W
    ClusterModel cluster = ClusterModel::thomas(2.0);
    double guard_width = 0.0; ///< simulation guard annulus, m; 0 selects the automatic width

    /// Throws std::invalid_argument naming the offending field. beta * duty = 1
    /// is accepted as the degenerate limit in which every node is gated off.
    void validate() const;

    /// theta scaled by l^alpha2 for D2D links of length l.
    double effective_theta() const { return theta * std::pow(d2d_dist, alpha2); }
    /// Minimum received power that satisfies the circuit-power constraint.
    double gate_threshold() const;
    /// Laplace argument theta (1 - beta D) / (beta P_c) used by the coverage bounds.
    double coverage_laplace_arg() const;
};

}  // namespace backcom
