// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.
// Usage: backcom_acceptance [criterion numbers...]

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <set>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "backcom/analytics.hpp"
#include "backcom/experiments.hpp"
#include "backcom/geometry.hpp"
#include "backcom/numerics.hpp"
#include "backcom/params.hpp"
#include "backcom/simulator.hpp"

using namespace backcom;

namespace {

constexpr double pi = 3.14159265358979323846;

struct Outcome
{
    bool pass = true;
    std::vector<std::string> notes;

    void check(bool ok, std::string note)
    {
        pass = pass && ok;
        notes.push_back((ok ? "  ok   " : "  FAIL ") + std::move(note));
    }
};

TrialConfig trials(std::uint64_t n, std::uint64_t seed)
{
    TrialConfig cfg;
    cfg.trials = n;
    cfg.seed = seed;
    cfg.batch_size = 1000;
    return cfg;
}

/// Standard error under the hypothesis that the mean of a [0, 1] variable with
/// second moment m2 is m1; needed when the sample is degenerate.
double null_stderr(double m1, double m2, std::uint64_t n)
{
    return std::sqrt(std::max(0.0, m2 - m1 * m1) / static_cast<double>(n));
}

double ks_statistic(std::vector<double> sample, const std::function<double(double)>& cdf)
{
    std::sort(sample.begin(), sample.end());
    const double n = static_cast<double>(sample.size());
    double d = 0.0;
    for (std::size_t i = 0; i < sample.size(); ++i) {
        const double f = cdf(sample[i]);
        d = std::max({d, f - i / n, (i + 1) / n - f});
    }
    return d;
}

NetworkParams matern_defaults()
{
    NetworkParams p;
    p.cluster = ClusterModel::matern(10.0);
    return p;
}

Outcome sampler_fidelity()
{
    Outcome out;
    Rng rng(101);
    for (const ClusterModel& model : {ClusterModel::matern(10.0), ClusterModel::thomas(2.0)}) {
        std::vector<double> r(100'000);
        for (double& v : r) {
            v = norm(model.sample_offset(rng));
        }
        const double ks = ks_statistic(r, [&](double x) { return model.radial_cdf(x); });
        out.check(ks < 0.01, fmt::format("{} radial KS = {:.5f} (< 0.01, n = 1e5)",
                                         model.kind() == ClusterKind::matern ? "matern" : "thomas",
                                         ks));
    }

    const NetworkParams p;
    const Window inner{{}, 30.0};
    const Window parents{{}, inner.radius + p.cluster.reach()};
    constexpr int draws = 4000;
    RunningStats density;
    for (int i = 0; i < draws; ++i) {
        double count = 0.0;
        for (const Point& y : sample_ppp(p.lambda_pb, parents, rng)) {
            for (const Point& x : sample_cluster(p.cluster, p.c_bar, y, rng)) {
                count += inner.contains(x);
            }
        }
        density.add(count / (pi * inner.radius * inner.radius));
    }
    const MCEstimate e = density.estimate();
    const double target = p.lambda_pb * p.c_bar;
    out.check(std::fabs(e.mean - target) <= 3.0 * e.std_error,
              fmt::format("node intensity {:.5f} +- {:.5f} vs {:.3f}", e.mean, e.std_error, target));
    return out;
}

Outcome power_outage_closed_form()
{
    Outcome out;
    const std::vector<double> grid = {0.1, 0.3, 0.5, 0.7, 0.9};
    int failures = 0;
    double worst = 0.0;
    std::string worst_note;
    for (const NetworkParams& base : {NetworkParams{}, matern_defaults()}) {
        for (double beta : grid) {
            for (double duty : grid) {
                NetworkParams p = base;
                p.beta = beta;
                p.duty = duty;
                const MCEstimate mc = estimate_power_outage(p, trials(100'000, 7), Variant::normal);
                const double exact = analytics::p0_closed(p);
                const double se = std::max(mc.std_error, null_stderr(exact, exact, mc.trials));
                const double z = se > 0.0 ? std::fabs(mc.mean - exact) / se
                                          : (mc.mean == exact ? 0.0 : INFINITY);
                failures += !(z <= 3.0);
                if (z >= worst) {
                    worst = z;
                    worst_note = fmt::format("{} beta={} D={}: mc {:.5g} +- {:.2g}, closed {:.5g}",
                                             base.cluster.kind() == ClusterKind::matern ? "matern"
                                                                                         : "thomas",
                                             beta, duty, mc.mean, se, exact);
                }
            }
        }
    }
    out.check(failures == 0, fmt::format("{} of 50 grid points outside 3 se; worst |z| = {:.2f} at {}",
                                         failures, worst, worst_note));
    return out;
}

Outcome chernoff_bound()
{
    Outcome out;
    const NetworkParams base;
    int violations = 0;
    for (int k = 1; k <= 9; ++k) {
        NetworkParams p = base;
        p.duty = 0.1 * k;
        const MCEstimate mc = estimate_power_outage(p, trials(100'000, 11), Variant::dense);
        const double bound = analytics::chernoff_p0_dense(p).bound;
        const bool ok = mc.mean <= bound;
        violations += !ok;
        out.notes.push_back(fmt::format("       D={:.1f}: mc p0' {:.5f} +- {:.5f}, bound {:.5f}",
                                        p.duty, mc.mean, mc.std_error, bound));
    }
    out.check(violations == 0, fmt::format("bound above MC at {} of 9 duty cycles", 9 - violations));
    const MCEstimate mc = estimate_power_outage(base, trials(100'000, 12), Variant::dense);
    const double gap = analytics::chernoff_p0_dense(base).bound - mc.mean;
    out.check(gap < 0.1, fmt::format("gap at defaults {:.5f} (< 0.1)", gap));
    return out;
}

Outcome laplace_oracle()
{
    Outcome out;
    NetworkParams p;
    const double s0 = p.effective_theta() * (1.0 - p.beta * p.duty) / (p.beta * p.p_c);
    std::vector<double> s_values;
    for (int e = -2; e <= 2; ++e) {
        s_values.push_back(s0 * std::pow(10.0, e));
    }
    const Point z{p.d2d_dist, 0.0};
    const std::uint64_t n = 100'000;

    const Window wn = simulation_window(p, Variant::normal);
    const auto opts_n = analytics_for_window(p, wn, Variant::normal);
    const auto mc_n = estimate_laplace(p, s_values, trials(n, 21), Variant::normal);
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const double s = s_values[i];
        const double ca = analytics::intra_cf(s, z, p, opts_n);
        const double cb = analytics::inter_cf(s, z, p, opts_n);
        const double ca2 = analytics::intra_cf(2.0 * s, z, p, opts_n);
        const double cb2 = analytics::inter_cf(2.0 * s, z, p, opts_n);
        struct Term
        {
            const char* name;
            double analytic;
            double second;
            MCEstimate mc;
        };
        for (const Term& t : {Term{"C_a", ca, ca2, mc_n[i].intra}, Term{"C_b", cb, cb2, mc_n[i].inter},
                              Term{"C_a C_b", ca * cb, ca2 * cb2, mc_n[i].total}}) {
            const double se = std::max(t.mc.std_error, null_stderr(t.analytic, t.second, n));
            const bool ok = std::fabs(t.mc.mean - t.analytic) <= 3.0 * se;
            out.check(ok, fmt::format("normal s={:.4g} {}: mc {:.6g} +- {:.2g}, analytic {:.6g}", s,
                                      t.name, t.mc.mean, se, t.analytic));
        }
    }

    const Window wd = simulation_window(p, Variant::dense);
    const auto opts_d = analytics_for_window(p, wd, Variant::dense);
    const auto mc_d = estimate_laplace(p, s_values, trials(n, 22), Variant::dense);
    for (std::size_t i = 0; i < s_values.size(); ++i) {
        const double lb = analytics::dense_cf_lb(s_values[i], z, p, opts_d);
        // At the boundary of the hypothesis the mean is lb; the bound at 2s then
        // understates the second moment, so this se errs on the strict side.
        const double lb2 = analytics::dense_cf_lb(2.0 * s_values[i], z, p, opts_d);
        const MCEstimate& mc = mc_d[i].total;
        const double se = std::max(mc.std_error, null_stderr(lb, lb2, n));
        out.check(lb <= mc.mean + 3.0 * se,
                  fmt::format("dense s={:.4g}: lb {:.6g} <= mc {:.6g} + 3 x {:.2g}", s_values[i], lb,
                              mc.mean, se));
    }
    return out;
}

Outcome coverage_bounds()
{
    Outcome out;
    const NetworkParams base;
    std::vector<double> theta_db;
    for (double db = -20.0; db <= 10.0 + 1e-9; db += 2.5) {
        theta_db.push_back(db);
    }
    std::vector<double> thetas;
    for (double db : theta_db) {
        thetas.push_back(db_to_linear(db));
    }
    const auto mc_n = estimate_success_sweep(base, thetas, trials(100'000, 31), Variant::normal);
    const auto mc_d = estimate_success_sweep(base, thetas, trials(100'000, 32), Variant::dense);
    const auto opts_n = analytics_for_window(base, simulation_window(base, Variant::normal),
                                             Variant::normal);
    const auto opts_d = analytics_for_window(base, simulation_window(base, Variant::dense),
                                             Variant::dense);
    int below = 0;
    int dense_wins = 0;
    for (std::size_t i = 0; i < thetas.size(); ++i) {
        NetworkParams q = base;
        q.theta = thetas[i];
        const double lb_n = analytics::coverage_lb_normal(q, opts_n);
        const double lb_d = analytics::coverage_lb_dense(q, opts_d);
        const MCEstimate& n = mc_n[i].success;
        const MCEstimate& d = mc_d[i].success;
        const bool ok_n = lb_n <= n.mean + 3.0 * n.std_error;
        const bool ok_d = lb_d <= d.mean + 3.0 * d.std_error;
        below += ok_n && ok_d;
        dense_wins += d.mean > n.mean;
        out.notes.push_back(fmt::format(
            "       theta={:+5.1f} dB: normal mc {:.5f} +- {:.5f} lb {:.3g} | dense mc {:.5f} lb {:.3g}",
            theta_db[i], n.mean, n.std_error, lb_n, d.mean, lb_d));
        if (theta_db[i] == -5.0) {
            const double gap = n.mean - lb_n;
            out.check(gap < 0.08, fmt::format("normal gap at -5 dB {:.5f} (< 0.08)", gap));
        }
    }
    const int total = static_cast<int>(thetas.size());
    out.check(below == total, fmt::format("lower bounds hold at {} of {} thresholds", below, total));
    out.check(dense_wins == total,
              fmt::format("dense P_s above normal at {} of {} thresholds", dense_wins, total));
    return out;
}

Outcome noise_robustness()
{
    Outcome out;
    NetworkParams p;
    p.noise = dbm_to_watts(-90.0);
    TrialConfig cfg = trials(100'000, 41);
    const MCEstimate quiet = estimate_success(p, cfg, Variant::normal);
    cfg.include_noise = true;
    const MCEstimate noisy = estimate_success(p, cfg, Variant::normal);
    const double change = std::fabs(quiet.mean - noisy.mean);
    out.check(change < 0.01, fmt::format("P_s {:.5f} without, {:.5f} with -90 dBm noise; change {:.2e}",
                                         quiet.mean, noisy.mean, change));
    return out;
}

Outcome capacity_optimizer()
{
    Outcome out;
    const NetworkParams base = matern_defaults();
    double best_d = 0.0;
    double best_c = -1.0;
    for (int k = 1; k <= 1000; ++k) {
        NetworkParams p = base;
        p.duty = 1e-3 * k;
        const double c = analytics::capacity_approx(p);
        if (c > best_c) {
            best_c = c;
            best_d = p.duty;
        }
    }
    const double d_star = std::min(1.0, base.alpha1 / (2.0 + base.alpha1 * base.beta));
    out.check(std::fabs(best_d - d_star) <= 1e-3,
              fmt::format("grid argmax D = {:.3f}, closed-form D* = {:.5f}", best_d, d_star));
    const double closed_max = analytics::max_capacity_matern(base);
    const double rel = std::fabs(best_c - closed_max) / closed_max;
    out.check(rel <= 1e-9, fmt::format("grid max {:.10g}, closed-form max {:.10g}, rel diff {:.2e}",
                                       best_c, closed_max, rel));
    const double opt = analytics::optimal_duty(base);
    out.check(std::fabs(opt - 0.78947) <= 1e-3, fmt::format("optimal_duty = {:.5f}", opt));
    out.notes.push_back(fmt::format(
        "       stationary point of D (1 - beta D)^(2/alpha1): {:.5f}",
        analytics::optimal_duty(base, analytics::DutyFormula::rederived)));
    return out;
}

Outcome manet_limit()
{
    Outcome out;
    NetworkParams a;
    NetworkParams b;
    b.lambda_nd = 0.1;
    b.theta = db_to_linear(0.0);
    NetworkParams c;
    c.alpha2 = 4.0;
    c.duty = 0.7;
    c.beta = 0.3;
    std::uint64_t seed = 51;
    for (const NetworkParams& p : {a, b, c}) {
        const MCEstimate mc = estimate_success(p, trials(100'000, seed++), Variant::micro_pb);
        const double exact = analytics::ps_micro(p);
        out.check(std::fabs(mc.mean - exact) <= 3.0 * mc.std_error,
                  fmt::format("lambda={} theta={:.4g} alpha2={} D={}: mc {:.5f} +- {:.5f}, closed {:.5f}",
                              p.lambda_nd, p.theta, p.alpha2, p.duty, mc.mean, mc.std_error, exact));
    }
    const double b23 = numerics::beta_fn(2.0 / 3.0, 1.0 / 3.0);
    const double target = 2.0 * pi / std::sqrt(3.0);
    out.check(std::fabs(b23 - target) <= 1e-10,
              fmt::format("B(2/3, 1/3) = {:.15f}, 2 pi / sqrt 3 = {:.15f}", b23, target));
    return out;
}

Outcome micro_pb_convergence()
{
    Outcome out;
    NetworkParams p;
    const std::vector<double> m = {200.0};
    const MCEstimate mc = estimate_micro_pb_power(p, m, trials(100'000, 61))[0];
    const double limit = analytics::micro_pb_power(p, analytics::MicroPbFormula::rederived);
    out.check(std::fabs(mc.mean - limit) <= 3.0 * mc.std_error,
              fmt::format("m=200: mc power {:.6g} +- {:.2g} W, limit {:.6g} W", mc.mean,
                          mc.std_error, limit));
    const auto report = analytics::micro_pb_discrepancy(p);
    out.notes.push_back("       " + report.describe());
    for (const NetworkParams& q : {matern_defaults()}) {
        out.notes.push_back("       matern: " + analytics::micro_pb_discrepancy(q).describe());
    }
    return out;
}

/// Location of the largest MC estimate along a sweep.
template <class F>
double argmax(const std::vector<double>& xs, F&& estimate, std::vector<std::string>& notes,
              const char* label)
{
    double best_x = xs.front();
    double best = -INFINITY;
    for (double x : xs) {
        const MCEstimate e = estimate(x);
        notes.push_back(fmt::format("       {} x={:.3f}: {:.5f} +- {:.5f}", label, x, e.mean,
                                    e.std_error));
        if (e.mean > best) {
            best = e.mean;
            best_x = x;
        }
    }
    return best_x;
}

Outcome figure_anchors()
{
    Outcome out;
    const NetworkParams base;
    std::vector<double> grid;
    for (int k = 2; k <= 18; ++k) {
        grid.push_back(0.05 * k);
    }
    const double beta_max = argmax(
        grid,
        [&](double beta) {
            NetworkParams p = base;
            p.beta = beta;
            return estimate_success(p, trials(20'000, 71), Variant::normal);
        },
        out.notes, "fig6a P_s beta");
    out.check(beta_max >= 0.45 - 1e-9 && beta_max <= 0.65 + 1e-9,
              fmt::format("fig6a maximum at beta = {:.2f} (in [0.45, 0.65])", beta_max));

    std::vector<double> duties;
    for (int k = 8; k <= 19; ++k) {
        duties.push_back(0.05 * k);
    }
    const double duty_max = argmax(
        duties,
        [&](double duty) {
            NetworkParams p = base;
            p.duty = duty;
            return estimate_capacity(p, trials(20'000, 72), Variant::normal);
        },
        out.notes, "fig8a capacity D");
    out.check(duty_max >= 0.55 - 1e-9 && duty_max <= 0.70 + 1e-9,
              fmt::format("fig8a maximum at D = {:.2f} (in [0.55, 0.70])", duty_max));

    std::vector<double> xs;
    std::vector<double> ys;
    for (double lambda : {0.1, 0.125, 0.15, 0.175, 0.2, 0.225, 0.25}) {
        NetworkParams p = base;
        p.lambda_pb = lambda;
        const MCEstimate e = estimate_capacity(p, trials(20'000, 73), Variant::normal);
        xs.push_back(lambda);
        ys.push_back(e.mean);
        out.notes.push_back(fmt::format("       fig7 capacity lambda={:.3f}: {:.5f} +- {:.5f}",
                                        lambda, e.mean, e.std_error));
    }
    const double n = static_cast<double>(xs.size());
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ys[i] / n;
    }
    double sxy = 0.0;
    double sxx = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    const double r2 = sxy * sxy / (sxx * syy);
    out.check(r2 > 0.99, fmt::format("fig7 linear fit R^2 = {:.5f} (> 0.99), slope {:.4f}", r2,
                                     sxy / sxx));
    return out;
}

struct Criterion
{
    int id;
    const char* name;
    Outcome (*run)();
};

}  // namespace

int main(int argc, char** argv)
{
    const std::vector<Criterion> criteria = {
        {1, "sampler fidelity", sampler_fidelity},
        {2, "power-outage closed form", power_outage_closed_form},
        {3, "dense power-outage Chernoff bound", chernoff_bound},
        {4, "Laplace functionals", laplace_oracle},
        {5, "coverage lower bounds", coverage_bounds},
        {6, "noise robustness", noise_robustness},
        {7, "capacity optimiser", capacity_optimizer},
        {8, "MANET limit", manet_limit},
        {9, "micro-PB convergence", micro_pb_convergence},
        {10, "qualitative figure anchors", figure_anchors},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) {
        selected.insert(std::atoi(argv[i]));
    }
    int failed = 0;
    for (const Criterion& c : criteria) {
        if (!selected.empty() && !selected.count(c.id)) {
            continue;
        }
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.check(false, std::string("exception: ") + e.what());
        }
        const double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        for (const std::string& note : o.notes) {
            std::printf("%s\n", note.c_str());
        }
        std::printf("%s criterion %d: %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", c.id, c.name, secs);
        std::fflush(stdout);
        failed += !o.pass;
    }
    std::printf("%d criteria failed\n", failed);
    return failed == 0 ? 0 : 1;
}
