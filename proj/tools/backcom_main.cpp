#include <chrono>
#include <ctime>
#include <exception>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <spdlog/spdlog.h>

#include "backcom/config.hpp"
#include "backcom/experiments.hpp"

namespace {

std::string timestamp()
{
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm utc{};
    gmtime_r(&now, &utc);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &utc);
    return buf;
}

void emit(const std::vector<backcom::CurveRow>& rows, const std::string& name,
          const std::string& output)
{
    const std::string comment = fmt::format("backcom {} generated {}", name, timestamp());
    if (output.empty() || output == "-") {
        backcom::write_csv(std::cout, rows, comment);
    } else {
        backcom::write_csv_file(output, rows, comment);
        spdlog::info("wrote {} rows to {}", rows.size(), output);
    }
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Monte Carlo and analytic evaluation of wirelessly powered backscatter networks"};
    app.require_subcommand(1);
    bool verbose = false;
    app.add_flag("-v,--verbose", verbose, "Log progress for every sweep point");

    auto* run = app.add_subcommand("run", "Run the experiment described by a config file");
    std::string run_config;
    run->add_option("config", run_config, "Config file")->required()->check(CLI::ExistingFile);

    auto* fig = app.add_subcommand("fig", "Reproduce one figure sweep as CSV");
    std::string fig_name;
    std::string out_dir = ".";
    backcom::FigureOptions fig_opts;
    fig->add_option("name", fig_name, "Figure name")
        ->required()
        ->check(CLI::IsMember(backcom::figure_names()));
    fig->add_option("--out", out_dir, "Output directory");
    fig->add_option("--trials", fig_opts.trials, "Monte Carlo trials per point")
        ->check(CLI::PositiveNumber);
    fig->add_option("--seed", fig_opts.seed, "Base seed");
    fig->add_option("--batch-size", fig_opts.batch_size, "Trials per RNG stream")
        ->check(CLI::PositiveNumber);
    fig->add_option("--threads", fig_opts.threads, "Worker threads (0: all cores)");

    auto* validate = app.add_subcommand("validate", "Check a config file and print the parameters");
    std::string validate_config;
    validate->add_option("config", validate_config, "Config file")
        ->required()
        ->check(CLI::ExistingFile);

    CLI11_PARSE(app, argc, argv);
    spdlog::set_level(verbose ? spdlog::level::info : spdlog::level::warn);
    spdlog::set_pattern("[%l] %v");

    try {
        if (*run) {
            const auto cfg = backcom::load_config(run_config);
            const auto rows = backcom::run_experiment(cfg.params, cfg.experiment);
            emit(rows, cfg.experiment.name, cfg.experiment.output);
        } else if (*fig) {
            const auto rows = backcom::run_figure(fig_name, backcom::NetworkParams{}, fig_opts);
            emit(rows, fig_name, (std::filesystem::path(out_dir) / (fig_name + ".csv")).string());
        } else if (*validate) {
            const auto cfg = backcom::load_config(validate_config);
            const auto& p = cfg.params;
            std::cout << "ok\n";
            for (const auto& key : backcom::numeric_param_keys()) {
                if ((key == "a" && p.cluster.kind() != backcom::ClusterKind::matern)
                    || (key == "sigma2" && p.cluster.kind() != backcom::ClusterKind::thomas)) {
                    continue;
                }
                std::cout << fmt::format("{} (linear) = {:.6g}\n", key,
                                         backcom::linear_value(p, key));
            }
            std::cout << "experiment = " << cfg.experiment.name << '\n'
                      << "variant = " << backcom::to_string(cfg.experiment.variant) << '\n'
                      << "trials = " << cfg.experiment.trials.trials << '\n';
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
