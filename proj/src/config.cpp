#include "backcom/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>

namespace backcom {

namespace {

struct ParamKey
{
    std::function<void(NetworkParams&, double)> set;
    std::function<double(const NetworkParams&)> linear;
};

const std::map<std::string, ParamKey, std::less<>>& param_table()
{
    static const std::map<std::string, ParamKey, std::less<>> table = {
        {"lambda_pb", {[](auto& p, double v) { p.lambda_pb = v; }, [](auto& p) { return p.lambda_pb; }}},
        {"c_bar", {[](auto& p, double v) { p.c_bar = v; }, [](auto& p) { return p.c_bar; }}},
        {"lambda_nd", {[](auto& p, double v) { p.lambda_nd = v; }, [](auto& p) { return p.lambda_nd; }}},
        {"m_bar", {[](auto& p, double v) { p.m_bar = v; }, [](auto& p) { return p.m_bar; }}},
        {"eta_dbm", {[](auto& p, double v) { p.eta = dbm_to_watts(v); }, [](auto& p) { return p.eta; }}},
        {"g", {[](auto& p, double v) { p.g = v; }, [](auto& p) { return p.g; }}},
        {"alpha1", {[](auto& p, double v) { p.alpha1 = v; }, [](auto& p) { return p.alpha1; }}},
        {"alpha2", {[](auto& p, double v) { p.alpha2 = v; }, [](auto& p) { return p.alpha2; }}},
        {"beta", {[](auto& p, double v) { p.beta = v; }, [](auto& p) { return p.beta; }}},
        {"duty", {[](auto& p, double v) { p.duty = v; }, [](auto& p) { return p.duty; }}},
        {"p_c_dbm", {[](auto& p, double v) { p.p_c = dbm_to_watts(v); }, [](auto& p) { return p.p_c; }}},
        {"theta_db", {[](auto& p, double v) { p.theta = db_to_linear(v); }, [](auto& p) { return p.theta; }}},
        {"sigma2",
         {[](auto& p, double v) {
              if (!(v > 0.0)) {
                  throw std::invalid_argument("must be positive");
              }
              p.cluster = ClusterModel::thomas(std::sqrt(v));
          },
          [](auto& p) { return p.cluster.scale() * p.cluster.scale(); }}},
        {"a", {[](auto& p, double v) { p.cluster = ClusterModel::matern(v); },
               [](auto& p) { return p.cluster.scale(); }}},
        {"nu", {[](auto& p, double v) { p.nu = v; }, [](auto& p) { return p.nu; }}},
        {"p_sum_dbm", {[](auto& p, double v) { p.p_sum = dbm_to_watts(v); }, [](auto& p) { return p.p_sum; }}},
        {"noise_dbm", {[](auto& p, double v) { p.noise = dbm_to_watts(v); }, [](auto& p) { return p.noise; }}},
        {"d2d_dist", {[](auto& p, double v) { p.d2d_dist = v; }, [](auto& p) { return p.d2d_dist; }}},
        {"guard_width", {[](auto& p, double v) { p.guard_width = v; }, [](auto& p) { return p.guard_width; }}},
    };
    return table;
}

const ParamKey& lookup(std::string_view key)
{
    const auto& table = param_table();
    const auto it = table.find(key);
    if (it == table.end()) {
        throw std::invalid_argument(std::string(key) + ": unknown parameter");
    }
    return it->second;
}

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

double parse_number(std::string_view text, std::string_view key)
{
    text = trim(text);
    double value = 0.0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
        throw std::invalid_argument(std::string(key) + ": expected a number, got '"
                                    + std::string(text) + "'");
    }
    return value;
}

std::uint64_t parse_count(std::string_view text, std::string_view key)
{
    text = trim(text);
    std::uint64_t value = 0;
    const auto* end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw std::invalid_argument(std::string(key) + ": expected a non-negative integer, got '"
                                    + std::string(text) + "'");
    }
    return value;
}

bool parse_flag(std::string_view text, std::string_view key)
{
    text = trim(text);
    if (text == "true" || text == "1" || text == "yes" || text == "on") {
        return true;
    }
    if (text == "false" || text == "0" || text == "no" || text == "off") {
        return false;
    }
    throw std::invalid_argument(std::string(key) + ": expected true or false");
}

}  // namespace

const std::vector<std::string>& numeric_param_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> out;
        for (const auto& [name, _] : param_table()) {
            out.push_back(name);
        }
        return out;
    }();
    return keys;
}

void apply_param(NetworkParams& params, std::string_view key, double value)
{
    const ParamKey& entry = lookup(key);
    try {
        entry.set(params, value);
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(key) + ": " + e.what());
    }
}

double linear_value(const NetworkParams& params, std::string_view key)
{
    return lookup(key).linear(params);
}

Variant parse_variant(std::string_view text)
{
    text = trim(text);
    if (text == "normal") {
        return Variant::normal;
    }
    if (text == "dense") {
        return Variant::dense;
    }
    if (text == "micro_pb") {
        return Variant::micro_pb;
    }
    throw std::invalid_argument("variant: expected normal, dense or micro_pb, got '"
                                + std::string(text) + "'");
}

Axis parse_axis(std::string_view text, std::string_view key, bool require_increasing)
{
    text = trim(text);
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) {
        throw std::invalid_argument(std::string(key) + ": expected 'param:v1,v2,...'");
    }
    Axis axis;
    axis.param = std::string(trim(text.substr(0, colon)));
    lookup(axis.param);
    std::string_view rest = text.substr(colon + 1);
    while (!rest.empty()) {
        const auto comma = rest.find(',');
        axis.values.push_back(parse_number(rest.substr(0, comma), key));
        if (comma == std::string_view::npos) {
            break;
        }
        rest = rest.substr(comma + 1);
    }
    if (axis.values.empty()) {
        throw std::invalid_argument(std::string(key) + ": no values given");
    }
    if (require_increasing
        && std::adjacent_find(axis.values.begin(), axis.values.end(), std::greater_equal<>())
               != axis.values.end()) {
        throw std::invalid_argument(std::string(key) + ": values must be strictly increasing");
    }
    return axis;
}

LoadedConfig parse_config(std::string_view text)
{
    LoadedConfig cfg;
    std::optional<std::string> cluster_kind;
    std::optional<double> matern_radius;
    std::optional<double> sigma2;
    std::map<std::string, std::size_t, std::less<>> seen;

    std::size_t line_no = 0;
    while (!text.empty()) {
        ++line_no;
        const auto newline = text.find('\n');
        std::string_view line = text.substr(0, newline);
        text = newline == std::string_view::npos ? std::string_view{} : text.substr(newline + 1);
        if (const auto hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string_view::npos) {
            throw std::invalid_argument("line " + std::to_string(line_no)
                                        + ": expected 'key = value'");
        }
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        if (!seen.emplace(key, line_no).second) {
            throw std::invalid_argument(key + ": given more than once");
        }

        ExperimentSpec& ex = cfg.experiment;
        if (key == "cluster") {
            if (value != "thomas" && value != "matern") {
                throw std::invalid_argument("cluster: expected thomas or matern");
            }
            cluster_kind = std::string(value);
        } else if (key == "a") {
            matern_radius = parse_number(value, key);
        } else if (key == "sigma2") {
            sigma2 = parse_number(value, key);
        } else if (key == "seed") {
            ex.trials.seed = parse_count(value, key);
        } else if (key == "trials") {
            ex.trials.trials = parse_count(value, key);
        } else if (key == "batch_size") {
            ex.trials.batch_size = parse_count(value, key);
        } else if (key == "threads") {
            ex.trials.threads = static_cast<unsigned>(parse_count(value, key));
        } else if (key == "include_noise") {
            ex.trials.include_noise = parse_flag(value, key);
        } else if (key == "window_radius") {
            ex.trials.window = Window{Point{}, parse_number(value, key)};
        } else if (key == "experiment") {
            ex.name = std::string(value);
        } else if (key == "variant") {
            ex.variant = parse_variant(value);
        } else if (key == "metric") {
            if (value != "success" && value != "outage" && value != "capacity") {
                throw std::invalid_argument("metric: expected success, outage or capacity");
            }
            ex.metric = std::string(value);
        } else if (key == "sweep") {
            ex.sweep = parse_axis(value, key, true);
        } else if (key == "series") {
            ex.series = parse_axis(value, key, false);
        } else if (key == "output") {
            ex.output = std::string(value);
        } else {
            apply_param(cfg.params, key, parse_number(value, key));
        }
    }

    // Cluster: an explicit kind wins; otherwise the shape key that was given.
    if (matern_radius && sigma2 && !cluster_kind) {
        throw std::invalid_argument("cluster: both a and sigma2 given; set cluster explicitly");
    }
    const std::string kind =
        cluster_kind.value_or(matern_radius ? "matern" : "thomas");
    try {
        cfg.params.cluster = kind == "matern" ? ClusterModel::matern(matern_radius.value_or(10.0))
                                              : ClusterModel::thomas(std::sqrt(sigma2.value_or(4.0)));
    } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(std::string(kind == "matern" ? "a" : "sigma2") + ": "
                                    + e.what());
    }

    cfg.params.validate();
    if (cfg.params.beta * cfg.params.duty >= 1.0) {
        throw std::invalid_argument("beta: beta * duty must be below 1 (got "
                                    + std::to_string(cfg.params.beta * cfg.params.duty) + ")");
    }
    cfg.experiment.trials.validate();
    return cfg;
}

LoadedConfig load_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("cannot open config file " + path.string());
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return parse_config(buffer.str());
}

}  // namespace backcom
