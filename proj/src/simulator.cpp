#include "backcom/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "backcom/channel.hpp"

namespace backcom {

const char* to_string(Variant variant) noexcept
{
    switch (variant) {
    case Variant::normal: return "normal";
    case Variant::dense: return "dense";
    case Variant::micro_pb: return "micro_pb";
    }
    return "unknown";
}

void TrialConfig::validate() const
{
    if (batch_size == 0 || trials < batch_size) {
        throw std::invalid_argument("trials: require trials >= batch_size >= 1 (trials="
                                    + std::to_string(trials)
                                    + ", batch_size=" + std::to_string(batch_size) + ")");
    }
    if (window && !(window->radius > 0.0 && std::isfinite(window->radius))) {
        throw std::invalid_argument("window: radius must be positive and finite");
    }
}

namespace {

double interferer_density(const NetworkParams& params, Variant variant)
{
    return variant == Variant::normal ? params.lambda_pb : params.lambda_nd * params.duty;
}

BatchPlan plan_for(const TrialConfig& cfg)
{
    cfg.validate();
    return BatchPlan{cfg.trials, cfg.batch_size, cfg.seed, cfg.threads};
}

Window window_for(const NetworkParams& params, const TrialConfig& cfg, Variant variant)
{
    return cfg.window ? *cfg.window : simulation_window(params, variant);
}

void check_window(const NetworkParams& params, const Window& window, Variant variant)
{
    const double required = params.d2d_dist + guard_width(params, variant);
    if (window.radius < required * (1.0 - 1e-12)) {
        throw std::invalid_argument("window: radius " + std::to_string(window.radius)
                                    + " m is smaller than link plus guard ("
                                    + std::to_string(required) + " m)");
    }
}

double noise_term(const NetworkParams& params, const TrialConfig& cfg)
{
    return cfg.include_noise ? params.noise : 0.0;
}

MCEstimate ratio_estimate(const RunningStats& num, const RunningStats& den)
{
    MCEstimate e;
    const double n = static_cast<double>(num.count());
    const double hits = num.mean() * n;
    const double base = std::round(den.mean() * n);
    e.trials = static_cast<std::uint64_t>(base);
    if (base <= 0.0) {
        e.mean = std::numeric_limits<double>::quiet_NaN();
        return e;
    }
    e.mean = std::clamp(hits / base, 0.0, 1.0);
    e.std_error = base > 1.0 ? std::sqrt(e.mean * (1.0 - e.mean) / (base - 1.0)) : 0.0;
    return e;
}

struct LinkSample
{
    bool active = false;
    double signal = 0.0;        ///< beta l(P0) h0
    double interference = 0.0;  ///< total, in the same units as signal
};

LinkSample micro_pb_link(const NetworkParams& params, const Window& window, Rng& rng)
{
    // All nodes transmit the same power, which cancels from the SIR.
    LinkSample link;
    link.active = true;
    link.signal = sample_fading(rng);
    const Point receiver = window.center + params.d2d_dist * sample_direction(rng);
    const auto others = sample_ppp(params.lambda_nd * params.duty, window, rng);
    for (const Point& x : others) {
        link.interference +=
            sample_fading(rng) * inverse_power_from_squared(squared_norm(x - receiver), params.alpha2);
    }
    return link;
}

/// Realization in a per-thread buffer, with only in-slot nodes generated.
const Realization& realize_fast(const NetworkParams& params, const Window& window,
                                Variant variant, Rng& rng)
{
    thread_local Realization buffer;
    if (variant == Variant::normal) {
        realize_normal_into(params, window, rng, RealizeMode::in_slot_only, buffer);
    } else {
        realize_dense_into(params, window, rng, buffer);
    }
    return buffer;
}

LinkSample sample_link(const NetworkParams& params, const Window& window, Variant variant,
                       Rng& rng)
{
    if (variant == Variant::micro_pb) {
        return micro_pb_link(params, window, rng);
    }
    const Realization& rz = realize_fast(params, window, variant, rng);
    const Node& typical = rz.nodes[rz.typical_node];
    LinkSample link;
    link.active = typical.active;
    link.signal = params.beta * typical.received_power * typical.fading;
    link.interference = interference_at(rz, params).total();
    return link;
}

}  // namespace

double guard_width(const NetworkParams& params, Variant variant)
{
    if (params.guard_width > 0.0) {
        return params.guard_width;
    }
    double width = 0.0;
    const double d0 = d0_threshold(params);
    if (std::isfinite(d0)) {
        width = 5.0 * d0;
    } else if (variant != Variant::micro_pb) {
        // The micro-PB limit has no gate, so an unbounded d0 only matters elsewhere.
        throw std::invalid_argument("guard_width: d0 is unbounded; set guard_width explicitly");
    }
    const double density = interferer_density(params, variant);
    if (density > 0.0) {
        width = std::max(width, 10.0 / std::sqrt(density));
    }
    return width > 0.0 ? width : params.d2d_dist;
}

Window simulation_window(const NetworkParams& params, Variant variant)
{
    return Window{Point{}, params.d2d_dist + guard_width(params, variant)};
}

void realize_normal_into(const NetworkParams& params, const Window& window, Rng& rng,
                         RealizeMode mode, Realization& rz)
{
    params.validate();
    check_window(params, window, Variant::normal);
    const double threshold = params.gate_threshold();
    const ClusterModel& cluster = params.cluster;
    const double eta_g = params.eta * params.g;

    rz.variant = Variant::normal;
    rz.pbs.clear();
    rz.nodes.clear();
    rz.cluster_begin.clear();

    // Typical node at the centre, its PB drawn from the offset law.
    const Point origin = window.center;
    rz.pbs.push_back(origin - cluster.sample_offset(rng));
    Node typical;
    typical.pos = origin;
    typical.parent = 0;
    typical.in_slot = true;
    typical.received_power = received_power_normal(origin, rz.pbs[0], params);
    typical.active = typical.received_power >= threshold;
    typical.fading = typical.active ? sample_fading(rng) : 0.0;
    rz.nodes.push_back(typical);
    rz.typical_node = 0;
    rz.typical_receiver = origin + params.d2d_dist * sample_direction(rng);

    const std::vector<Point> others =
        sample_ppp(params.lambda_pb, Window{window.center, window.radius + cluster.reach()}, rng);
    rz.pbs.insert(rz.pbs.end(), others.begin(), others.end());

    auto add_member = [&](std::size_t parent, bool in_slot) {
        const Point offset = cluster.sample_offset(rng);
        Node node;
        node.pos = rz.pbs[parent] + offset;
        node.parent = parent;
        node.in_slot = in_slot;
        const double d2 = squared_norm(offset);
        node.received_power = d2 > 0.0 ? eta_g * inverse_power_from_squared(d2, params.alpha1)
                                       : std::numeric_limits<double>::infinity();
        node.active = in_slot && node.received_power >= threshold;
        node.fading = node.active ? sample_fading(rng) : 0.0;
        rz.nodes.push_back(node);
    };

    const std::size_t clusters = rz.pbs.size();
    if (mode == RealizeMode::full) {
        // Palm: the typical cluster keeps a Poisson(c) set of other members.
        for (std::size_t j = 0; j < clusters; ++j) {
            const std::uint64_t count = rng.poisson(params.c_bar);
            for (std::uint64_t k = 0; k < count; ++k) {
                add_member(j, rng.bernoulli(params.duty));
            }
        }
    } else {
        // Independent Poisson(c D) counts per PB, drawn as a Poisson total
        // with uniformly assigned parents.
        const std::uint64_t total =
            rng.poisson(params.c_bar * params.duty * static_cast<double>(clusters));
        rz.nodes.reserve(total + 1);
        for (std::uint64_t k = 0; k < total; ++k) {
            add_member(rng.index(clusters), true);
        }
    }
}

Realization realize_normal(const NetworkParams& params, const Window& window, Rng& rng,
                           RealizeMode mode)
{
    Realization rz;
    realize_normal_into(params, window, rng, mode, rz);
    return rz;
}

void realize_dense_into(const NetworkParams& params, const Window& window, Rng& rng,
                        Realization& rz)
{
    params.validate();
    check_window(params, window, Variant::dense);
    const double threshold = params.gate_threshold();
    const ClusterModel& cluster = params.cluster;

    rz.variant = Variant::dense;
    rz.pbs.clear();
    rz.nodes.clear();
    rz.cluster_begin.clear();
    const Point origin = window.center;

    auto add_node = [&](Point pos) {
        Node node;
        node.pos = pos;
        node.parent = rz.nodes.size();
        node.in_slot = true;
        const std::size_t begin = rz.pbs.size();
        rz.cluster_begin.push_back(begin);
        const std::uint64_t count = rng.poisson(params.m_bar);
        for (std::uint64_t k = 0; k < count; ++k) {
            rz.pbs.push_back(pos + cluster.sample_offset(rng));
        }
        node.received_power =
            count > 0 ? received_power_dense(
                            pos, std::span<const Point>(rz.pbs).subspan(begin, count), params)
                      : 0.0;
        node.active = node.received_power >= threshold;
        node.fading = node.active ? sample_fading(rng) : 0.0;
        rz.nodes.push_back(node);
    };

    add_node(origin);
    rz.typical_node = 0;
    rz.typical_receiver = origin + params.d2d_dist * sample_direction(rng);
    const std::vector<Point> in_slot =
        thin(sample_ppp(params.lambda_nd, window, rng), params.duty, rng);
    for (const Point& p : in_slot) {
        add_node(p);
    }
    rz.cluster_begin.push_back(rz.pbs.size());
}

Realization realize_dense(const NetworkParams& params, const Window& window, Rng& rng)
{
    Realization rz;
    realize_dense_into(params, window, rng, rz);
    return rz;
}

Interference interference_at(const Realization& rz, const NetworkParams& params)
{
    Interference result;
    if (rz.nodes.empty()) {
        return result;
    }
    const std::size_t home = rz.nodes[rz.typical_node].parent;
    for (std::size_t i = 0; i < rz.nodes.size(); ++i) {
        const Node& node = rz.nodes[i];
        if (i == rz.typical_node || !node.active) {
            continue;
        }
        const double d2 = squared_norm(node.pos - rz.typical_receiver);
        const double term = params.beta * node.received_power * node.fading
                            * inverse_power_from_squared(d2, params.alpha2);
        if (rz.variant == Variant::normal && node.parent == home) {
            result.intra += term;
        } else {
            result.inter += term;
        }
    }
    return result;
}

MCEstimate estimate_power_outage(const NetworkParams& params, const TrialConfig& cfg,
                                 Variant variant)
{
    params.validate();
    if (variant == Variant::micro_pb) {
        throw std::invalid_argument(
            "variant: power outage is not random in the micro-PB limit; use min_sum_power");
    }
    const double threshold = params.gate_threshold();
    TrialFunction trial;
    if (variant == Variant::normal) {
        trial = [&](Rng& rng, std::span<double> out) {
            const Point offset = params.cluster.sample_offset(rng);
            const double p = received_power_normal(Point{}, offset, params);
            out[0] = p >= threshold ? 0.0 : 1.0;
        };
    } else {
        trial = [&](Rng& rng, std::span<double> out) {
            const std::uint64_t count = rng.poisson(params.m_bar);
            double p = 0.0;
            for (std::uint64_t k = 0; k < count; ++k) {
                p += params.eta * params.g
                     * inverse_power_from_squared(squared_norm(params.cluster.sample_offset(rng)),
                                                  params.alpha1);
            }
            out[0] = p >= threshold ? 0.0 : 1.0;
        };
    }
    return run_batches(plan_for(cfg), 1, trial)[0].estimate();
}

std::vector<LaplaceEstimate> estimate_laplace(const NetworkParams& params,
                                              std::span<const double> s_values,
                                              const TrialConfig& cfg, Variant variant)
{
    params.validate();
    if (variant == Variant::micro_pb) {
        throw std::invalid_argument("variant: Laplace estimates need the normal or dense model");
    }
    for (double s : s_values) {
        if (!(s >= 0.0)) {
            throw std::invalid_argument("s: must be non-negative");
        }
    }
    const Window window = window_for(params, cfg, variant);
    const std::size_t n = s_values.size();
    auto laplace = [](double s, double i) { return i > 0.0 ? std::exp(-s * i) : 1.0; };
    const auto stats = run_batches(plan_for(cfg), 3 * n, [&](Rng& rng, std::span<double> out) {
        const Realization& rz = realize_fast(params, window, variant, rng);
        const Interference i = interference_at(rz, params);
        for (std::size_t k = 0; k < n; ++k) {
            out[3 * k] = laplace(s_values[k], i.intra);
            out[3 * k + 1] = laplace(s_values[k], i.inter);
            out[3 * k + 2] = laplace(s_values[k], i.total());
        }
    });
    std::vector<LaplaceEstimate> result(n);
    for (std::size_t k = 0; k < n; ++k) {
        result[k] = {stats[3 * k].estimate(), stats[3 * k + 1].estimate(),
                     stats[3 * k + 2].estimate()};
    }
    return result;
}

LaplaceEstimate estimate_laplace(const NetworkParams& params, double s, const TrialConfig& cfg,
                                 Variant variant)
{
    return estimate_laplace(params, std::span<const double>(&s, 1), cfg, variant).front();
}

std::vector<SuccessBreakdown> estimate_success_sweep(const NetworkParams& params,
                                                     std::span<const double> thetas,
                                                     const TrialConfig& cfg, Variant variant)
{
    params.validate();
    if (variant == Variant::micro_pb && cfg.include_noise) {
        throw std::invalid_argument(
            "include_noise: the micro-PB limit has no absolute power scale; disable noise");
    }
    std::vector<double> effective;
    effective.reserve(thetas.size());
    const double scale = std::pow(params.d2d_dist, params.alpha2);
    for (double t : thetas) {
        if (!(t > 0.0)) {
            throw std::invalid_argument("theta: must be positive");
        }
        effective.push_back(t * scale);
    }
    const Window window = window_for(params, cfg, variant);
    const double noise = noise_term(params, cfg);
    const std::size_t n = effective.size();
    const auto stats = run_batches(plan_for(cfg), n + 1, [&](Rng& rng, std::span<double> out) {
        const LinkSample link = sample_link(params, window, variant, rng);
        const double floor = link.interference + noise;
        for (std::size_t k = 0; k < n; ++k) {
            out[k] = link.active && link.signal >= effective[k] * floor ? 1.0 : 0.0;
        }
        out[n] = link.active ? 1.0 : 0.0;
    });
    std::vector<SuccessBreakdown> result(n);
    for (std::size_t k = 0; k < n; ++k) {
        result[k].success = stats[k].estimate();
        result[k].active = stats[n].estimate();
        result[k].conditional = ratio_estimate(stats[k], stats[n]);
    }
    return result;
}

MCEstimate estimate_success(const NetworkParams& params, const TrialConfig& cfg, Variant variant)
{
    const double theta = params.theta;
    return estimate_success_sweep(params, std::span<const double>(&theta, 1), cfg, variant)
        .front()
        .success;
}

MCEstimate estimate_capacity(const NetworkParams& params, const TrialConfig& cfg, Variant variant)
{
    const MCEstimate ps = estimate_success(params, cfg, variant);
    const double density = variant == Variant::normal
                               ? params.lambda_pb * params.c_bar * params.duty
                               : params.lambda_nd * params.duty;
    return MCEstimate{density * ps.mean, density * ps.std_error, ps.trials};
}

std::vector<MCEstimate> estimate_micro_pb_power(const NetworkParams& params,
                                                std::span<const double> m_bars,
                                                const TrialConfig& cfg)
{
    params.validate();
    const BatchPlan plan = plan_for(cfg);
    const double scale = params.eta * params.g * params.p_sum;
    std::vector<MCEstimate> result;
    result.reserve(m_bars.size());
    for (double m : m_bars) {
        if (!(m > 0.0) || !std::isfinite(m)) {
            throw std::invalid_argument("m_bar: must be positive and finite");
        }
        const auto stats = run_batches(plan, 1, [&](Rng& rng, std::span<double> out) {
            std::uint64_t count = 0;
            while (count == 0) {
                count = rng.poisson(m);
            }
            double sum = 0.0;
            for (std::uint64_t k = 0; k < count; ++k) {
                sum += truncated_path_loss(norm(params.cluster.sample_offset(rng)), params);
            }
            out[0] = scale * sum / static_cast<double>(count);
        });
        result.push_back(stats[0].estimate());
    }
    return result;
}

}  // namespace backcom
