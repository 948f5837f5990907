#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "xrip/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"xrip: RIP verification laboratory for structured random matrix products"};
    app.set_version_flag("--version", std::string(xrip::cli::kVersion));

    std::string subcommand;
    std::string config_path;
    std::string out_dir;
    unsigned long long seed = 0;
    long threads = -1;
    std::vector<std::string> overrides;

    std::string subcommand_help = "one of:";
    for (const auto& name : xrip::cli::subcommand_names()) subcommand_help += " " + name;
    app.add_option("subcommand", subcommand, subcommand_help)->required();
    app.add_option("--config", config_path, "experiment config file (key = value)");
    app.add_option("--seed", seed, "master seed (overrides config)");
    app.add_option("--out", out_dir, "output directory (overrides config)");
    app.add_option("--threads", threads, "worker threads for Monte Carlo trials (0 = auto)");
    app.add_option("--set", overrides, "override a config key as key=value")
        ->take_all()
        ->allow_extra_args(false);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : xrip::cli::kUsage;
    }

    try {
        xrip::cli::ExperimentConfig config =
            config_path.empty() ? xrip::cli::parse_config_text("", subcommand)
                                : xrip::cli::parse_config_file(config_path, subcommand);
        config.subcommand = subcommand;
        for (const auto& assignment : overrides) {
            xrip::cli::apply_override(config, assignment);
        }
        if (app.count("--seed")) config.params["seed"] = std::to_string(seed);
        if (!out_dir.empty()) config.params["out"] = out_dir;
        if (threads >= 0) config.params["threads"] = std::to_string(threads);
        return xrip::cli::run(config);
    } catch (const xrip::cli::ConfigError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return xrip::cli::kUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return xrip::cli::kIo;
    }
}
