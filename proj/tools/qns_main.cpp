#include "qns/config.hpp"
#include "qns/operators.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw qns::Error("cannot open config " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"quantum noise polyspectra: analytic spectra, SME trajectories, estimators"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    int workers = 1;
    long long seed_override = -1;
    int order_override = 0;

    app.add_option("--config", config_path, "JSON run configuration");
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--workers", workers, "worker threads for grid evaluation")->check(CLI::PositiveNumber);
    app.add_option("--seed", seed_override, "override config seed");
    app.add_option("--order", order_override, "override spectrum order (2,3,4)");

    auto* sc_spectrum = app.add_subcommand("spectrum", "evaluate analytic polyspectra on a grid");
    auto* sc_simulate = app.add_subcommand("simulate", "integrate the stochastic master equation");
    auto* sc_estimate = app.add_subcommand("estimate", "estimate spectra from a trajectory file");
    auto* sc_validate = app.add_subcommand("validate", "run the built-in oracle suites");

    CLI11_PARSE(app, argc, argv);

    try {
        qns::convention_self_test();

        qns::RunConfig cfg;
        if (!config_path.empty()) {
            cfg = qns::RunConfig::from_json_text(slurp(config_path));
        } else if (!sc_validate->parsed()) {
            std::cerr << "error: --config is required for this subcommand\n";
            return 1;
        }
        if (seed_override >= 0) cfg.sim.seed = std::uint64_t(seed_override);
        if (order_override) cfg.order = order_override;

        qns::RunPaths paths;
        paths.out_dir = out_dir;

        std::vector<std::string> written;
        if (sc_spectrum->parsed()) {
            cfg.task = "spectrum";
            written = qns::run_spectrum(cfg, paths, workers);
        } else if (sc_simulate->parsed()) {
            cfg.task = "simulate";
            written = qns::run_simulate(cfg, paths);
        } else if (sc_estimate->parsed()) {
            cfg.task = "estimate";
            written = qns::run_estimate(cfg, paths);
        } else if (sc_validate->parsed()) {
            cfg.task = "validate";
            bool failed = false;
            written = qns::run_validate(cfg, paths, workers, &failed);
            for (const auto& f : written) std::cerr << "wrote " << f << "\n";
            return failed ? 2 : 0;
        }
        for (const auto& f : written) std::cerr << "wrote " << f << "\n";
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
