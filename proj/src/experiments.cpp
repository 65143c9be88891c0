#include "backcom/experiments.hpp"

#include <algorithm>
#include <fstream>
#include <functional>
#include <ostream>
#include <stdexcept>

#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "backcom/channel.hpp"

namespace backcom {

namespace {

struct PointResult
{
    std::optional<MCEstimate> mc;
    std::optional<double> analytic;
};

using PointFunction = std::function<PointResult(const NetworkParams&, const TrialConfig&)>;

TrialConfig trial_config(const FigureOptions& opts)
{
    TrialConfig cfg;
    cfg.trials = opts.trials;
    cfg.seed = opts.seed;
    cfg.batch_size = std::min(opts.batch_size, opts.trials);
    cfg.threads = opts.threads;
    return cfg;
}

std::vector<double> range(double first, double step, int count)
{
    std::vector<double> v(count);
    for (int i = 0; i < count; ++i) {
        v[i] = first + step * i;
    }
    return v;
}

std::string label(const Axis& axis, double value)
{
    return axis.empty() ? std::string() : fmt::format("{}={:g}", axis.param, value);
}

/// Checks a point before simulation; throws std::invalid_argument if infeasible.
void check_point(const NetworkParams& p)
{
    p.validate();
    if (p.beta * p.duty >= 1.0) {
        throw std::invalid_argument("beta: beta * duty must be below 1");
    }
}

std::vector<CurveRow> sweep_grid(std::string_view experiment, const NetworkParams& base,
                                 const Axis& series, const Axis& sweep, const TrialConfig& cfg,
                                 const PointFunction& point)
{
    std::vector<CurveRow> rows;
    const std::vector<double> series_values =
        series.empty() ? std::vector<double>{0.0} : series.values;
    for (double sv : series_values) {
        for (double xv : sweep.values) {
            NetworkParams p = base;
            CurveRow row;
            row.experiment = std::string(experiment);
            row.series = label(series, sv);
            row.x = xv;
            try {
                if (!series.empty()) {
                    apply_param(p, series.param, sv);
                }
                apply_param(p, sweep.param, xv);
                row.x = linear_value(p, sweep.param);
                check_point(p);
                const PointResult r = point(p, cfg);
                if (r.mc) {
                    row.y_mc = r.mc->mean;
                    row.y_mc_stderr = r.mc->std_error;
                    row.trials = r.mc->trials;
                }
                row.y_analytic = r.analytic;
            } catch (const std::invalid_argument& e) {
                spdlog::warn("{} {} {}={}: {}", experiment, row.series, sweep.param, xv, e.what());
            }
            spdlog::info("{} {} x={:g} mc={} analytic={}", experiment, row.series, row.x,
                         row.y_mc ? fmt::format("{:.5g}", *row.y_mc) : "-",
                         row.y_analytic ? fmt::format("{:.5g}", *row.y_analytic) : "-");
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

PointFunction success_point(Variant variant)
{
    return [variant](const NetworkParams& p, const TrialConfig& cfg) {
        PointResult r;
        r.mc = estimate_success(p, cfg, variant);
        const Window window = simulation_window(p, variant);
        const auto opts = analytics_for_window(p, window, variant);
        switch (variant) {
        case Variant::normal: r.analytic = analytics::coverage_lb_normal(p, opts); break;
        case Variant::dense: r.analytic = analytics::coverage_lb_dense(p, opts); break;
        case Variant::micro_pb: r.analytic = analytics::ps_micro(p); break;
        }
        return r;
    };
}

PointFunction outage_point(Variant variant)
{
    return [variant](const NetworkParams& p, const TrialConfig& cfg) {
        PointResult r;
        r.mc = estimate_power_outage(p, cfg, variant);
        r.analytic = variant == Variant::normal ? analytics::p0_closed(p)
                                                : analytics::chernoff_p0_dense(p).bound;
        return r;
    };
}

PointFunction capacity_point(Variant variant)
{
    return [variant](const NetworkParams& p, const TrialConfig& cfg) {
        PointResult r;
        r.mc = estimate_capacity(p, cfg, variant);
        if (variant == Variant::normal) {
            r.analytic = analytics::capacity_approx(p);
        } else if (variant == Variant::micro_pb) {
            r.analytic = p.lambda_nd * p.duty * analytics::ps_micro(p);
        }
        return r;
    };
}

PointFunction point_for(std::string_view metric, Variant variant)
{
    if (metric == "success") {
        return success_point(variant);
    }
    if (metric == "outage") {
        return outage_point(variant);
    }
    if (metric == "capacity") {
        return capacity_point(variant);
    }
    throw std::invalid_argument("metric: unknown metric '" + std::string(metric) + "'");
}

const Axis c_bar_series{"c_bar", {3.0, 4.0, 5.0}};

std::vector<CurveRow> run_fig5(const NetworkParams& base, const TrialConfig& cfg)
{
    const std::vector<double> theta_db = range(-20.0, 2.5, 13);
    std::vector<double> thetas;
    for (double db : theta_db) {
        thetas.push_back(db_to_linear(db));
    }
    const double noise = base.noise > 0.0 ? base.noise : dbm_to_watts(-90.0);
    std::vector<CurveRow> rows;
    for (Variant variant : {Variant::normal, Variant::dense}) {
        NetworkParams p = base;
        p.noise = noise;
        check_point(p);
        const Window window = simulation_window(p, variant);
        const auto opts = analytics_for_window(p, window, variant);
        for (bool noisy : {false, true}) {
            TrialConfig c = cfg;
            c.include_noise = noisy;
            const auto mc = estimate_success_sweep(p, thetas, c, variant);
            for (std::size_t i = 0; i < thetas.size(); ++i) {
                CurveRow row;
                row.experiment = "fig5";
                row.series = std::string(to_string(variant)) + (noisy ? "_noise" : "");
                row.x = thetas[i];
                row.y_mc = mc[i].success.mean;
                row.y_mc_stderr = mc[i].success.std_error;
                row.trials = mc[i].success.trials;
                if (!noisy) {
                    NetworkParams q = p;
                    q.theta = thetas[i];
                    row.y_analytic = variant == Variant::normal
                                         ? analytics::coverage_lb_normal(q, opts)
                                         : analytics::coverage_lb_dense(q, opts);
                }
                spdlog::info("fig5 {} theta_db={:g} mc={:.5g}", row.series, theta_db[i],
                             *row.y_mc);
                rows.push_back(std::move(row));
            }
        }
    }
    return rows;
}

}  // namespace

const std::vector<std::string>& figure_names()
{
    static const std::vector<std::string> names = {"fig4",  "fig5",  "fig6a", "fig6b",
                                                   "fig7",  "fig8a", "fig8b"};
    return names;
}

bool is_figure(std::string_view name)
{
    const auto& names = figure_names();
    return std::find(names.begin(), names.end(), name) != names.end();
}

analytics::AnalyticsOptions analytics_for_window(const NetworkParams& params,
                                                 const Window& window, Variant variant)
{
    analytics::AnalyticsOptions opts;
    opts.region_radius =
        variant == Variant::normal ? window.radius + params.cluster.reach() : window.radius;
    return opts;
}

std::vector<CurveRow> run_figure(std::string_view name, const NetworkParams& base,
                                 const FigureOptions& options)
{
    const TrialConfig cfg = trial_config(options);
    cfg.validate();
    const Axis duty_axis{"duty", range(0.1, 0.1, 9)};
    const Axis beta_axis{"beta", range(0.1, 0.1, 9)};
    if (name == "fig4") {
        return sweep_grid(name, base, Axis{"m_bar", {base.m_bar}}, duty_axis, cfg,
                          outage_point(Variant::dense));
    }
    if (name == "fig5") {
        return run_fig5(base, cfg);
    }
    if (name == "fig6a") {
        return sweep_grid(name, base, c_bar_series, beta_axis, cfg, success_point(Variant::normal));
    }
    if (name == "fig6b") {
        return sweep_grid(name, base, c_bar_series, duty_axis, cfg, success_point(Variant::normal));
    }
    if (name == "fig7") {
        const Axis lambda_axis{"lambda_pb", {0.05, 0.1, 0.15, 0.2, 0.25, 0.3, 0.4, 0.5}};
        return sweep_grid(name, base, c_bar_series, lambda_axis, cfg,
                          capacity_point(Variant::normal));
    }
    if (name == "fig8a") {
        return sweep_grid(name, base, c_bar_series, duty_axis, cfg,
                          capacity_point(Variant::normal));
    }
    if (name == "fig8b") {
        return sweep_grid(name, base, c_bar_series, beta_axis, cfg,
                          capacity_point(Variant::normal));
    }
    throw std::invalid_argument("experiment: unknown figure '" + std::string(name) + "'");
}

std::vector<CurveRow> run_experiment(const NetworkParams& params, const ExperimentSpec& spec)
{
    if (is_figure(spec.name)) {
        FigureOptions opts;
        opts.trials = spec.trials.trials;
        opts.seed = spec.trials.seed;
        opts.batch_size = spec.trials.batch_size;
        opts.threads = spec.trials.threads;
        return run_figure(spec.name, params, opts);
    }
    if (spec.name != "custom") {
        throw std::invalid_argument("experiment: unknown experiment '" + spec.name + "'");
    }
    if (spec.sweep.empty()) {
        throw std::invalid_argument("sweep: a custom experiment needs a sweep axis");
    }
    return sweep_grid(spec.name, params, spec.series, spec.sweep, spec.trials,
                      point_for(spec.metric, spec.variant));
}

void write_csv(std::ostream& out, std::span<const CurveRow> rows, std::string_view comment)
{
    auto cell = [](const std::optional<double>& v) {
        return v ? fmt::format("{:.12g}", *v) : std::string();
    };
    out << "# " << comment << '\n' << csv_header << '\n';
    for (const CurveRow& row : rows) {
        out << row.experiment << ',' << row.series << ',' << fmt::format("{:.12g}", row.x) << ','
            << cell(row.y_mc) << ',' << cell(row.y_mc_stderr) << ',' << cell(row.y_analytic)
            << ',' << row.trials << '\n';
    }
}

void write_csv_file(const std::filesystem::path& path, std::span<const CurveRow> rows,
                    std::string_view comment)
{
    if (path.has_parent_path()) {
        std::filesystem::create_directories(path.parent_path());
    }
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    write_csv(out, rows, comment);
}

}  // namespace backcom
