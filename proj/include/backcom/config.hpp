#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "backcom/params.hpp"
#include "backcom/simulator.hpp"

namespace backcom {

/// Values a parameter takes along one axis of an experiment.
struct Axis
{
    std::string param;  ///< a numeric config key, e.g. "beta" or "theta_db"
    std::vector<double> values;

    bool empty() const noexcept { return param.empty(); }
};

struct ExperimentSpec
{
    /// A registered figure name (fig4, fig5, ...) or "custom".
    std::string name = "custom";
    Variant variant = Variant::normal;
    /// custom experiments: success, outage or capacity.
    std::string metric = "success";
    Axis sweep;
    Axis series;
    TrialConfig trials;
    /// CSV destination; empty writes to standard output.
    std::string output;
};

struct LoadedConfig
{
    NetworkParams params;
    ExperimentSpec experiment;
};

/// Parses flat "key = value" text with '#' comments. Throws
/// std::invalid_argument naming the key for unknown keys, malformed values and
/// invalid parameter combinations (including beta * duty >= 1).
LoadedConfig parse_config(std::string_view text);
LoadedConfig load_config(const std::filesystem::path& path);

/// Numeric keys that may appear in a config file or as a sweep/series axis.
const std::vector<std::string>& numeric_param_keys();

/// Applies one numeric key in config units (dB, dBm, sigma2) to params.
void apply_param(NetworkParams& params, std::string_view key, double value);

/// Value of key in linear units as written to CSV (theta_db -> theta, ...).
double linear_value(const NetworkParams& params, std::string_view key);

Variant parse_variant(std::string_view text);

/// "param:v1,v2,...". Sweep axes (require_increasing) must be strictly increasing.
Axis parse_axis(std::string_view text, std::string_view key, bool require_increasing);

}  // namespace backcom
