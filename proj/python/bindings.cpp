#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "backcom/analytics.hpp"
#include "backcom/channel.hpp"
#include "backcom/config.hpp"
#include "backcom/experiments.hpp"
#include "backcom/simulator.hpp"

namespace py = pybind11;
using namespace backcom;

namespace {

TrialConfig make_trials(std::uint64_t trials, std::uint64_t seed, std::uint64_t batch_size,
                        bool include_noise, unsigned threads, std::optional<double> window_radius)
{
    TrialConfig cfg;
    cfg.trials = trials;
    cfg.seed = seed;
    cfg.batch_size = batch_size;
    cfg.include_noise = include_noise;
    cfg.threads = threads;
    if (window_radius) {
        cfg.window = Window{{}, *window_radius};
    }
    cfg.validate();
    return cfg;
}

analytics::AnalyticsOptions region(std::optional<double> radius)
{
    analytics::AnalyticsOptions opts;
    if (radius) {
        opts.region_radius = *radius;
    }
    return opts;
}

}  // namespace

PYBIND11_MODULE(_backcom, m)
{
    m.doc() = "Backscatter network simulator and analytic bounds";

    py::enum_<Variant>(m, "Variant")
        .value("normal", Variant::normal)
        .value("dense", Variant::dense)
        .value("micro_pb", Variant::micro_pb);

    py::class_<ClusterModel>(m, "ClusterModel")
        .def_static("matern", &ClusterModel::matern, py::arg("radius"))
        .def_static("thomas", &ClusterModel::thomas, py::arg("sigma"))
        .def_property_readonly("kind", [](const ClusterModel& c) {
            return c.kind() == ClusterKind::matern ? "matern" : "thomas";
        })
        .def_property_readonly("scale", &ClusterModel::scale)
        .def("radial_pdf", &ClusterModel::radial_pdf)
        .def("radial_cdf", &ClusterModel::radial_cdf)
        .def("__eq__", [](const ClusterModel& a, const ClusterModel& b) { return a == b; })
        .def("__repr__", [](const ClusterModel& c) {
            return std::string(c.kind() == ClusterKind::matern ? "matern(" : "thomas(")
                   + std::to_string(c.scale()) + ")";
        });

    py::class_<NetworkParams>(m, "NetworkParams")
        .def(py::init<>())
        .def_readwrite("lambda_pb", &NetworkParams::lambda_pb)
        .def_readwrite("c_bar", &NetworkParams::c_bar)
        .def_readwrite("lambda_nd", &NetworkParams::lambda_nd)
        .def_readwrite("m_bar", &NetworkParams::m_bar)
        .def_readwrite("eta", &NetworkParams::eta)
        .def_readwrite("g", &NetworkParams::g)
        .def_readwrite("alpha1", &NetworkParams::alpha1)
        .def_readwrite("alpha2", &NetworkParams::alpha2)
        .def_readwrite("beta", &NetworkParams::beta)
        .def_readwrite("duty", &NetworkParams::duty)
        .def_readwrite("p_c", &NetworkParams::p_c)
        .def_readwrite("theta", &NetworkParams::theta)
        .def_readwrite("d2d_dist", &NetworkParams::d2d_dist)
        .def_readwrite("noise", &NetworkParams::noise)
        .def_readwrite("nu", &NetworkParams::nu)
        .def_readwrite("p_sum", &NetworkParams::p_sum)
        .def_readwrite("cluster", &NetworkParams::cluster)
        .def_readwrite("guard_width", &NetworkParams::guard_width)
        .def("validate", &NetworkParams::validate)
        .def("gate_threshold", &NetworkParams::gate_threshold)
        .def("coverage_laplace_arg", &NetworkParams::coverage_laplace_arg)
        .def("set", [](NetworkParams& p, const std::string& key, double value) {
            apply_param(p, key, value);
            return p;
        }, "Set a parameter by config key; values in dB/dBm for the *_db(m) keys.");

    py::class_<TrialConfig>(m, "TrialConfig")
        .def(py::init(&make_trials), py::arg("trials") = 10'000, py::arg("seed") = 1,
             py::arg("batch_size") = 500, py::arg("include_noise") = false,
             py::arg("threads") = 0, py::arg("window_radius") = py::none())
        .def_readonly("trials", &TrialConfig::trials)
        .def_readonly("seed", &TrialConfig::seed)
        .def_readonly("batch_size", &TrialConfig::batch_size)
        .def_readonly("include_noise", &TrialConfig::include_noise);

    py::class_<MCEstimate>(m, "MCEstimate")
        .def_readonly("mean", &MCEstimate::mean)
        .def_readonly("std_error", &MCEstimate::std_error)
        .def_readonly("trials", &MCEstimate::trials)
        .def("__repr__", [](const MCEstimate& e) {
            return "MCEstimate(mean=" + std::to_string(e.mean)
                   + ", std_error=" + std::to_string(e.std_error)
                   + ", trials=" + std::to_string(e.trials) + ")";
        });

    m.def("d0_threshold", &d0_threshold);
    m.def("estimate_power_outage", &estimate_power_outage);
    m.def("estimate_success", &estimate_success);
    m.def("estimate_capacity", &estimate_capacity);
    m.def("estimate_success_sweep",
          [](const NetworkParams& p, const std::vector<double>& thetas, const TrialConfig& cfg,
             Variant variant) {
              std::vector<MCEstimate> out;
              for (const auto& b : estimate_success_sweep(p, thetas, cfg, variant)) {
                  out.push_back(b.success);
              }
              return out;
          });
    m.def("estimate_laplace",
          [](const NetworkParams& p, const std::vector<double>& s, const TrialConfig& cfg,
             Variant variant) {
              py::list out;
              for (const auto& e : estimate_laplace(p, s, cfg, variant)) {
                  out.append(py::make_tuple(e.intra, e.inter, e.total));
              }
              return out;
          },
          "Per s: (intra, inter, total) estimates of E exp(-s I).");
    m.def("estimate_micro_pb_power",
          [](const NetworkParams& p, const std::vector<double>& m_bars, const TrialConfig& cfg) {
              return estimate_micro_pb_power(p, m_bars, cfg);
          });

    py::enum_<analytics::MicroPbFormula>(m, "MicroPbFormula")
        .value("as_printed", analytics::MicroPbFormula::as_printed)
        .value("rederived", analytics::MicroPbFormula::rederived);
    py::enum_<analytics::DutyFormula>(m, "DutyFormula")
        .value("as_printed", analytics::DutyFormula::as_printed)
        .value("rederived", analytics::DutyFormula::rederived);

    auto a = m.def_submodule("analytics", "Closed forms and numerical bounds");
    a.def("p0_closed", &analytics::p0_closed);
    a.def("ccdf_transmit", &analytics::ccdf_transmit);
    a.def("chernoff_p0_dense",
          [](const NetworkParams& p) { return analytics::chernoff_p0_dense(p).bound; });
    a.def("intra_cf",
          [](double s, double z, const NetworkParams& p, std::optional<double> radius) {
              return analytics::intra_cf(s, {z, 0.0}, p, region(radius));
          },
          py::arg("s"), py::arg("z"), py::arg("params"), py::arg("region_radius") = py::none());
    a.def("inter_cf",
          [](double s, double z, const NetworkParams& p, std::optional<double> radius) {
              return analytics::inter_cf(s, {z, 0.0}, p, region(radius));
          },
          py::arg("s"), py::arg("z"), py::arg("params"), py::arg("region_radius") = py::none());
    a.def("dense_cf_lb",
          [](double s, double z, const NetworkParams& p, std::optional<double> radius) {
              return analytics::dense_cf_lb(s, {z, 0.0}, p, region(radius));
          },
          py::arg("s"), py::arg("z"), py::arg("params"), py::arg("region_radius") = py::none());
    a.def("coverage_lb_normal",
          [](const NetworkParams& p, std::optional<double> radius) {
              return analytics::coverage_lb_normal(p, region(radius));
          },
          py::arg("params"), py::arg("region_radius") = py::none());
    a.def("coverage_lb_dense",
          [](const NetworkParams& p, std::optional<double> radius) {
              return analytics::coverage_lb_dense(p, region(radius));
          },
          py::arg("params"), py::arg("region_radius") = py::none());
    a.def("micro_pb_power", &analytics::micro_pb_power);
    a.def("micro_pb_discrepancy",
          [](const NetworkParams& p) { return analytics::micro_pb_discrepancy(p).describe(); });
    a.def("min_sum_power", &analytics::min_sum_power, py::arg("params"),
          py::arg("formula") = analytics::MicroPbFormula::rederived);
    a.def("ps_micro", &analytics::ps_micro);
    a.def("capacity_approx", &analytics::capacity_approx);
    a.def("max_capacity_matern", &analytics::max_capacity_matern);
    a.def("optimal_duty", &analytics::optimal_duty, py::arg("params"),
          py::arg("formula") = analytics::DutyFormula::as_printed);

    py::class_<CurveRow>(m, "CurveRow")
        .def_readonly("experiment", &CurveRow::experiment)
        .def_readonly("series", &CurveRow::series)
        .def_readonly("x", &CurveRow::x)
        .def_readonly("y_mc", &CurveRow::y_mc)
        .def_readonly("y_mc_stderr", &CurveRow::y_mc_stderr)
        .def_readonly("y_analytic", &CurveRow::y_analytic)
        .def_readonly("trials", &CurveRow::trials);

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def_readonly("name", &ExperimentSpec::name)
        .def_readonly("metric", &ExperimentSpec::metric)
        .def_readonly("output", &ExperimentSpec::output);

    m.attr("csv_header") = std::string(csv_header);
    m.def("figure_names", &figure_names);
    m.def("run_figure",
          [](const std::string& name, const NetworkParams& p, std::uint64_t trials,
             std::uint64_t seed, std::uint64_t batch_size, unsigned threads) {
              FigureOptions opts;
              opts.trials = trials;
              opts.seed = seed;
              opts.batch_size = batch_size;
              opts.threads = threads;
              return run_figure(name, p, opts);
          },
          py::arg("name"), py::arg("params") = NetworkParams{}, py::arg("trials") = 10'000,
          py::arg("seed") = 1, py::arg("batch_size") = 500, py::arg("threads") = 0);
    m.def("run_experiment", &run_experiment);
    m.def("write_csv_file", [](const std::filesystem::path& path, const std::vector<CurveRow>& rows,
                               const std::string& comment) {
        write_csv_file(path, rows, comment);
    });
    m.def("parse_config", [](const std::string& text) {
        LoadedConfig cfg = parse_config(text);
        return py::make_tuple(cfg.params, cfg.experiment);
    }, "Returns (NetworkParams, ExperimentSpec).");
    m.def("load_config", [](const std::filesystem::path& path) {
        LoadedConfig cfg = load_config(path);
        return py::make_tuple(cfg.params, cfg.experiment);
    });
}
