#include <cstdio>
#include <exception>
#include <string>
#include <variant>

#include <CLI11.hpp>

#include "flc/harness.hpp"
#include "flc/verify.hpp"

int main(int argc, char** argv) {
    CLI::App app{"flux-limited chemotaxis simulator and verification harness"};
    app.require_subcommand(1);

    std::string config_file, out_dir;
    int jobs = 1;
    double p = 1.0, q = 1.0;
    int n = 1;

    auto* simulate = app.add_subcommand("simulate", "run one simulation from a config file");
    simulate->add_option("--config", config_file, "JSON config file")->required();
    simulate->add_option("--out", out_dir, "output directory (overrides config output_dir)");

    auto* sweep = app.add_subcommand("sweep", "run a parameter sweep and write atlas.csv");
    sweep->add_option("--config", config_file, "JSON sweep config file")->required();
    sweep->add_option("--out", out_dir, "output directory")->required();
    sweep->add_option("--jobs", jobs, "worker count (overrides config)");

    auto* verify = app.add_subcommand("verify", "run the built-in certification suite");

    auto* classify = app.add_subcommand("classify", "print the boundedness regime label");
    classify->add_option("--p", p, "diffusion exponent")->required();
    classify->add_option("--q", q, "chemotaxis exponent")->required();
    classify->add_option("--n", n, "spatial dimension")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (simulate->parsed()) {
            auto cfg = flc::parse_config(config_file);
            if (!std::holds_alternative<flc::RunConfig>(cfg))
                throw flc::ConfigError("(root)", "simulate expects a run config, got a sweep");
            auto run_cfg = std::get<flc::RunConfig>(cfg);
            if (!out_dir.empty()) run_cfg.output_dir = out_dir;
            return flc::simulate_command(run_cfg);
        }
        if (sweep->parsed()) {
            auto cfg = flc::parse_config(config_file);
            if (!std::holds_alternative<flc::SweepConfig>(cfg))
                throw flc::ConfigError("(root)", "sweep expects a config with a 'sweep' section");
            auto sweep_cfg = std::get<flc::SweepConfig>(cfg);
            if (sweep->count("--jobs") > 0) sweep_cfg.jobs = jobs;
            return flc::sweep_command(sweep_cfg, out_dir);
        }
        if (verify->parsed()) return flc::verify_command();
        if (classify->parsed()) return flc::classify_command(p, q, n);
    } catch (const flc::ConfigError& e) {
        std::fprintf(stderr, "config error: %s\n", e.what());
        return 4;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
    return 0;
}
