#pragma once

#include "qns/estimators.hpp"
#include "qns/models.hpp"
#include "qns/types.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace qns {

// Run configuration mirrored one-to-one onto the JSON config file.
// Frequencies in the grid section are ordinary (cycles per time unit: GHz for
// the ZnO model); the engine converts to angular internally.
struct RunConfig {
    struct Model {
        std::string type = "single-spin";       // single-spin | zno | custom
        std::array<double, 3> omega{1, 0, 0};   // single-spin
        double gamma = 0.1;
        std::array<double, 3> B_mT{0, 0, 0};    // zno
        double temperature_K = 300;
        double gamma_e_per_ns = 1.0 / 20;
        double gamma_n_per_ns = 5e-5;
        std::string hyperfine = "isotropic";    // isotropic | x-only
        std::string file;                       // custom: matrices JSON
    } model;

    struct Measurement {
        double beta = 1.0;
        bool include_shot_noise = false;
        bool include_measurement_damping = false;
    } measurement;

    std::string task = "spectrum"; // spectrum | simulate | estimate | validate
    int order = 2;

    struct Axis {
        double lo = 0, hi = 1;
        int n = 100;
    };
    struct Grid {
        Axis f1;
        std::optional<Axis> f2;
    } grid;

    struct Sim {
        double dt = 1e-3;
        std::uint64_t steps = 100000;
        std::uint64_t seed = 1;
    } sim;

    struct Estimate {
        std::string input;                      // trajectory file
        int frame_len = 1024;
        int m_per_group = 8;
        std::string window = "rectangular";     // rectangular | hann
        int kmax = 16;                          // s3 bin half-width
        std::vector<std::array<double, 2>> s4_pairs; // ordinary-frequency pairs
    } estimate;

    struct Output {
        std::string prefix = "out";
        std::string format = "csv";
    } output;

    static RunConfig from_json_text(const std::string& text);
    std::string to_json_text() const;

    ModelBundle build_model() const;
    FrameSpec frame_spec() const;
};

// Custom model matrices file: dim, H and A as re/im row-major arrays, and an
// optional list of single-factor isotropic dissipators.
ModelBundle load_custom_model(const std::string& path);

struct RunPaths {
    std::string out_dir = ".";
};

// Task drivers shared by the CLI and the integration tests. Return the list
// of files written. run_validate returns its exit code through `failed`.
std::vector<std::string> run_spectrum(const RunConfig& cfg, const RunPaths& paths, int workers);
std::vector<std::string> run_simulate(const RunConfig& cfg, const RunPaths& paths);
std::vector<std::string> run_estimate(const RunConfig& cfg, const RunPaths& paths);
std::vector<std::string> run_validate(const RunConfig& cfg, const RunPaths& paths, int workers, bool* failed);

} // namespace qns
