#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "backcom/geometry.hpp"
#include "backcom/monte_carlo.hpp"
#include "backcom/params.hpp"
#include "backcom/random.hpp"

namespace backcom {

/*!
 * normal: nodes clustered around PBs. dense: PBs clustered around nodes.
 * micro_pb: the dense-micro-PB limit, i.e. a PPP of in-slot nodes that all
 * transmit with the same power (the circuit gate is always open).
 */
enum class Variant { normal, dense, micro_pb };

const char* to_string(Variant variant) noexcept;

struct TrialConfig
{
    std::uint64_t trials = 10'000;
    std::optional<Window> window;  ///< defaults to simulation_window(params, variant)
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 500;
    bool include_noise = false;
    unsigned threads = 0;          ///< 0 selects the hardware concurrency

    /// Throws std::invalid_argument unless trials >= batch_size >= 1.
    void validate() const;
};

/// Width of the annulus between the typical link and the window boundary:
/// guard_width if set, else max(5 d0, 10 / sqrt(lambda)) with lambda the
/// interferer-cluster density of the variant (lambda_pb, or lambda_nd D).
double guard_width(const NetworkParams& params, Variant variant);

/// Disk centred at the origin with radius d2d_dist + guard_width.
Window simulation_window(const NetworkParams& params, Variant variant);

struct Node
{
    Point pos;
    std::size_t parent = 0;     ///< normal: PB index; dense: index of the node's own PB cluster
    bool in_slot = true;        ///< in its backscatter mini-slot
    bool active = false;        ///< in slot and the circuit gate is open
    double received_power = 0.0;
    double fading = 0.0;        ///< fading of the node-to-receiver link; 0 when inactive
};

struct Realization
{
    Variant variant = Variant::normal;
    std::vector<Point> pbs;
    std::vector<Node> nodes;
    /// dense only: PBs of node i are pbs[cluster_begin[i] .. cluster_begin[i + 1]).
    std::vector<std::size_t> cluster_begin;
    std::size_t typical_node = 0;
    Point typical_receiver;
};

/*!
 * full: every cluster member is generated and flagged in or out of its
 * mini-slot. in_slot_only: only in-slot members are generated, as a
 * Poisson(c D) count per PB; the interferer process has the same law and the
 * estimators use this cheaper form.
 */
enum class RealizeMode { full, in_slot_only };

/// Throws std::invalid_argument if the window is narrower than the typical
/// link plus the guard annulus.
Realization realize_normal(const NetworkParams& params, const Window& window, Rng& rng,
                           RealizeMode mode = RealizeMode::full);
Realization realize_dense(const NetworkParams& params, const Window& window, Rng& rng);

/// As above, reusing the storage of out.
void realize_normal_into(const NetworkParams& params, const Window& window, Rng& rng,
                         RealizeMode mode, Realization& out);
void realize_dense_into(const NetworkParams& params, const Window& window, Rng& rng,
                        Realization& out);

struct Interference
{
    double intra = 0.0;
    double inter = 0.0;

    double total() const noexcept { return intra + inter; }
};

/// Interference at the typical receiver from active nodes other than the
/// typical one. In the dense model every interferer is counted as inter-cluster.
Interference interference_at(const Realization& realization, const NetworkParams& params);

/// Fraction of trials in which the typical node is gated off (p0 or p0').
MCEstimate estimate_power_outage(const NetworkParams& params, const TrialConfig& cfg,
                                 Variant variant);

struct LaplaceEstimate
{
    MCEstimate intra;
    MCEstimate inter;
    MCEstimate total;
};

/// E[exp(-s I)] at each s. The dense model has no intra-cluster part, so its
/// intra estimate is identically 1 and inter equals total.
std::vector<LaplaceEstimate> estimate_laplace(const NetworkParams& params,
                                              std::span<const double> s_values,
                                              const TrialConfig& cfg, Variant variant);
LaplaceEstimate estimate_laplace(const NetworkParams& params, double s, const TrialConfig& cfg,
                                 Variant variant);

struct SuccessBreakdown
{
    MCEstimate success;      ///< P(beta l(P) h >= theta_eff (I + N))
    MCEstimate active;       ///< P(gate open), i.e. 1 - p0
    MCEstimate conditional;  ///< success given an open gate
};

/// Success probability at each SIR threshold (linear, before the l^alpha2
/// scaling) from one shared set of realizations.
std::vector<SuccessBreakdown> estimate_success_sweep(const NetworkParams& params,
                                                     std::span<const double> thetas,
                                                     const TrialConfig& cfg, Variant variant);
MCEstimate estimate_success(const NetworkParams& params, const TrialConfig& cfg, Variant variant);

/// Transmitting density times the estimated success probability.
MCEstimate estimate_capacity(const NetworkParams& params, const TrialConfig& cfg,
                             Variant variant);

/// Received power of the typical node when a Poisson(m) cluster of micro-PBs
/// (conditioned on at least one) shares p_sum, under truncated path loss.
std::vector<MCEstimate> estimate_micro_pb_power(const NetworkParams& params,
                                                std::span<const double> m_bars,
                                                const TrialConfig& cfg);

}  // namespace backcom
