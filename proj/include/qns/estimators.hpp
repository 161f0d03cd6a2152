#pragma once

#include "qns/sme.hpp"
#include "qns/types.hpp"

#include <vector>

namespace qns {

enum class Window { Rectangular, Hann };

struct FrameSpec {
    int frame_len = 1024;       // power of two preferred
    Window window = Window::Rectangular;
    int m_per_group = 8;        // frames per estimator group, >= 2
};

// Per-frame spectra z_j(omega_k) = dt * sum_n e^{+i omega_k t_n} z_n with
// omega_k = 2 pi k / (frame_len * dt); bins k > N/2 alias to negative
// frequencies. Hann frames are amplitude-corrected so the order-2 density
// normalization is preserved.
struct FrameSet {
    int frame_len = 0;
    double dt = 0;
    std::vector<Vec> frames;

    double frame_duration() const { return frame_len * dt; }
    double omega_of_bin(int k) const;      // signed angular frequency
    int bin_of_omega(double omega) const;  // nearest bin index in 0..N-1
};

FrameSet frame_fft(const std::vector<double>& z, double dt, const FrameSpec& spec);
inline FrameSet frame_fft(const TrajectoryRecord& traj, const FrameSpec& spec) {
    return frame_fft(traj.z, traj.dt, spec);
}

struct SpectralEstimate1D {
    std::vector<double> omega;
    std::vector<double> value;
    std::vector<double> se;
    int n_groups = 0;
};

// Bias-corrected group estimator of the power spectral density,
// S~ = m/(m-1) [ mean|z|^2 - |mean z|^2 ] / T, averaged over groups.
SpectralEstimate1D estimate_s2(const FrameSet& frames, const FrameSpec& spec);

struct SpectralEstimate2D {
    std::vector<double> w1, w2;     // axes
    std::vector<cxd> value;         // row-major [i1 * n2 + i2]
    std::vector<double> se_re, se_im;
    int n_groups = 0;
};

// Bispectrum estimate on the bin grid k1, k2 in [-kmax, kmax] with exact
// bin arithmetic k3 = -k1-k2 (mod N). Frame means are removed first (the DC
// bin is zeroed), then the third sample cumulant is formed per group.
SpectralEstimate2D estimate_s3(const FrameSet& frames, const FrameSpec& spec, int kmax);

struct ScalarEstimate {
    double value = 0, se = 0;       // real part and its standard error
    double value_im = 0, se_im = 0;
    int n_groups = 0;
};

// Fourth joint sample cumulant of (z(w1), z(-w1), z(w2), z(-w2)) per group,
// divided by the frame duration. Requires w1 != +-w2 and both nonzero bins.
ScalarEstimate estimate_s4_corr(const FrameSet& frames, const FrameSpec& spec, double w1, double w2);

// --- signal-to-noise scaling experiment ---

struct SnrExperimentConfig {
    std::vector<int> n_systems;     // must span at least a decade
    int n_repeats = 1;              // independent repetitions pooled per N
    double beta = 0.1;              // per-system measurement strength, fixed across N
    SimConfig sim;                  // per-system run settings (seed is the base seed)
    FrameSpec frames;
    double w2_target = 1.0;         // s2 probe frequency
    std::vector<std::array<double, 2>> w4_pairs{{0.9, 1.1}}; // cut probes, coherently combined
    double w3_a = 0.0, w3_b = 0.0;  // s3 probe pair
};

struct SnrPoint {
    int n_systems = 0;
    double snr2 = 0, snr3 = 0, snr4 = 0;
};

struct SnrResult {
    std::vector<SnrPoint> points;
    double exponent2 = 0, exponent3 = 0, exponent4 = 0; // d log SNR / d log N
};

// Simulates N independent copies of the model summed onto one detector and
// fits the SNR scaling exponent per requested order.
SnrResult snr_experiment(const ModelBundle& model, const SnrExperimentConfig& cfg,
                         const std::vector<int>& orders);

} // namespace qns
