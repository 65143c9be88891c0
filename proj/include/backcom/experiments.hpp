#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "backcom/analytics.hpp"
#include "backcom/config.hpp"
#include "backcom/simulator.hpp"

namespace backcom {

struct CurveRow
{
    std::string experiment;
    std::string series;
    double x = 0.0;
    std::optional<double> y_mc;
    std::optional<double> y_mc_stderr;
    std::optional<double> y_analytic;
    std::uint64_t trials = 0;
};

/// Header line of every CSV file, after the leading comment line.
inline constexpr std::string_view csv_header =
    "experiment,series,x,y_mc,y_mc_stderr,y_analytic,trials";

struct FigureOptions
{
    std::uint64_t trials = 10'000;
    std::uint64_t seed = 1;
    std::uint64_t batch_size = 500;
    unsigned threads = 0;
};

/// fig4, fig5, fig6a, fig6b, fig7, fig8a, fig8b.
const std::vector<std::string>& figure_names();
bool is_figure(std::string_view name);

/// Analytic options whose cluster-centre region matches the simulation window:
/// the PB region (window plus cluster reach) for the normal model, the window
/// itself for the dense model.
analytics::AnalyticsOptions analytics_for_window(const NetworkParams& params,
                                                 const Window& window, Variant variant);

/// Runs a registered figure sweep starting from base.
std::vector<CurveRow> run_figure(std::string_view name, const NetworkParams& base,
                                 const FigureOptions& opts);

/// Runs a config-driven experiment: a registered figure, or a custom sweep.
std::vector<CurveRow> run_experiment(const NetworkParams& params, const ExperimentSpec& spec);

void write_csv(std::ostream& out, std::span<const CurveRow> rows, std::string_view comment);
void write_csv_file(const std::filesystem::path& path, std::span<const CurveRow> rows,
                    std::string_view comment);

}  // namespace backcom
