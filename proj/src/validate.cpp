#include "qns/validate.hpp"

#include "qns/estimators.hpp"
#include "qns/grids.hpp"
#include "qns/models.hpp"
#include "qns/polyspectra.hpp"
#include "qns/rng.hpp"
#include "qns/traj_io.hpp"

#include <nlohmann/json.hpp>

#include <cmath>

namespace qns {

namespace {

Mat random_hermitian(Xoshiro256pp& rng, int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cxd(rng.next_normal(), rng.next_normal());
    return (m + m.adjoint()) / 2.0;
}

Mat random_matrix(Xoshiro256pp& rng, int d) {
    Mat m(d, d);
    for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) m(i, j) = cxd(rng.next_normal(), rng.next_normal());
    return m;
}

// random Lindblad-form Liouvillian with a generic unique steady state
Liouvillian random_liouvillian(Xoshiro256pp& rng, int d) {
    const Mat h = random_hermitian(rng, d);
    const Mat id = Mat::Identity(d, d);
    Mat diss = Mat::Zero(Eigen::Index(d) * d, Eigen::Index(d) * d);
    for (int k = 0; k < 2; ++k) {
        const Mat j = 0.6 * random_matrix(rng, d);
        const Mat jdj = j.adjoint() * j;
        diss += sandwich_superop(j, j.adjoint()) - 0.5 * sandwich_superop(jdj, id) -
                0.5 * sandwich_superop(id, jdj);
    }
    const Mat a = random_hermitian(rng, d);
    return build_liouvillian(h, {DissipatorSpec::custom(diss)}, a, 0.0);
}

Mat thermal_state(const Mat& h, double temperature) {
    Eigen::SelfAdjointEigenSolver<Mat> es(h);
    const double e0 = es.eigenvalues().minCoeff();
    Vec boltz(h.rows());
    for (Eigen::Index k = 0; k < h.rows(); ++k)
        boltz[k] = std::exp(-(es.eigenvalues()[k] - e0) / temperature);
    Mat rho = es.eigenvectors() * boltz.asDiagonal() * es.eigenvectors().adjoint();
    return rho / rho.trace().real();
}

} // namespace

std::vector<CheckResult> run_validation_suite(std::uint64_t seed, int workers) {
    (void)workers;
    std::vector<CheckResult> out;
    Xoshiro256pp rng(seed ^ 0x5eedf00dULL);

    // cumulant equivalence on random 4-dimensional Liouvillians
    {
        double worst3 = 0, worst4 = 0;
        const int n_models = 5, n_tuples = 5;
        for (int t = 0; t < n_models; ++t) {
            const Liouvillian l = random_liouvillian(rng, 4);
            SpectralCache cache(l);
            for (int s = 0; s < n_tuples; ++s) {
                std::vector<double> ts;
                double acc = 0.05 + 0.3 * rng.next_unit();
                for (int k = 0; k < 4; ++k) {
                    ts.push_back(acc);
                    acc += 0.05 + 0.6 * rng.next_unit();
                }
                const double c3a = cumulant3_time(cache, ts[0], ts[1], ts[2], 1.0);
                const double c3b = cumulant_from_moments(l, {ts[0], ts[1], ts[2]}, 1.0, 3);
                worst3 = std::max(worst3, std::abs(c3a - c3b) / std::max({std::abs(c3a), std::abs(c3b), 1e-12}));
                const double c4a = cumulant4_time(cache, ts[0], ts[1], ts[2], ts[3], 1.0);
                const double c4b = cumulant_from_moments(l, ts, 1.0, 4);
                worst4 = std::max(worst4, std::abs(c4a - c4b) / std::max({std::abs(c4a), std::abs(c4b), 1e-12}));
            }
        }
        out.push_back({"cumulant3-compact-vs-moments", worst3, 1e-9, worst3 <= 1e-9, "max relative deviation"});
        out.push_back({"cumulant4-compact-vs-moments", worst4, 1e-9, worst4 <= 1e-9, "max relative deviation"});
    }

    // single-spin sum rule
    {
        SingleSpinParams p;
        p.omega = {1.0, 0.0, 0.0};
        p.gamma = 0.1;
        const Liouvillian l = single_spin_model(p).build(0.0);
        const double integral = integrated_noise_check(l, 1.0, 100 * p.gamma, 20001);
        const double dev = std::abs(integral / (2 * 3.14159265358979323846) - 1.0);
        out.push_back({"sum-rule-single-spin", dev, 0.01, dev <= 0.01, "relative deviation of integral from 2 pi"});
    }

    // FDT on a thermal two-level system
    {
        const double w0 = 1.0, gamma = w0 / 100, temp = w0;
        Mat h = 0.5 * w0 * pauli_z();
        Mat rho_th = thermal_state(h, temp);
        ModelBundle m;
        m.dim = 2;
        m.H = h;
        m.A = pauli_x();
        m.dissipators.push_back(DissipatorSpec::isotropic_single(2, gamma, rho_th));
        const Liouvillian l = m.build(0.0);
        const double resid = std::abs(fdt_residual(l, w0, temp));
        const double scale = std::abs(susceptibility(l, w0).imag());
        const double rel = resid / scale;
        out.push_back({"fdt-thermal-two-level", rel, 0.05, rel <= 0.05, "|residual| / |Im alpha|"});
    }

    // white-noise estimator calibration (Isserlis)
    {
        const double beta = 1.0, dt = 0.5;
        const std::uint64_t steps = 1 << 19;
        Xoshiro256pp noise(seed + 17);
        std::vector<double> z(static_cast<size_t>(steps));
        for (auto& v : z) v = 0.5 * beta * noise.next_normal() / std::sqrt(dt);
        FrameSpec fs;
        fs.frame_len = 256;
        fs.m_per_group = 8;
        const FrameSet frames = frame_fft(z, dt, fs);
        const auto est = estimate_s2(frames, fs);
        double worst = 0;
        for (size_t k = 0; k < est.value.size(); ++k)
            worst = std::max(worst, std::abs(est.value[k] - 0.25) / std::max(est.se[k], 1e-300));
        // 256 bins, 1% family-wise: per-bin threshold ~ Phi^-1(1 - 0.005/256) = 4.11 sigma
        out.push_back({"white-noise-s2-flat-quarter", worst, 4.2, worst <= 4.2, "max |dev|/se over bins"});

        const auto s3e = estimate_s3(frames, fs, 12);
        double worst3 = 0;
        for (size_t i = 0; i < s3e.value.size(); ++i) {
            worst3 = std::max(worst3, std::abs(s3e.value[i].real()) / std::max(s3e.se_re[i], 1e-300));
            worst3 = std::max(worst3, std::abs(s3e.value[i].imag()) / std::max(s3e.se_im[i], 1e-300));
        }
        out.push_back({"white-noise-s3-zero", worst3, 4.8, worst3 <= 4.8, "max |value|/se over 25x25 grid"});

        const auto s4e = estimate_s4_corr(frames, fs, frames.omega_of_bin(20), frames.omega_of_bin(33));
        const double dev4 = std::abs(s4e.value) / std::max(s4e.se, 1e-300);
        out.push_back({"white-noise-s4corr-zero", dev4, 4.0, dev4 <= 4.0, "|value|/se at one probe pair"});
    }

    // trajectory reproducibility
    {
        SingleSpinParams p;
        p.omega = {1.0, 0.0, 0.0};
        p.gamma = 0.1;
        const ModelBundle m = single_spin_model(p);
        SimConfig sc;
        sc.dt = 0.05;
        sc.steps = 5000;
        sc.seed = seed + 99;
        sc.beta = 0.2;
        const TrajectoryRecord a = simulate(m, sc);
        const TrajectoryRecord b = simulate(m, sc);
        bool same = a.z.size() == b.z.size();
        for (size_t k = 0; same && k < a.z.size(); ++k) same = a.z[k] == b.z[k];
        out.push_back({"trajectory-bit-reproducibility", same ? 0.0 : 1.0, 0.0, same, "identical seed, identical samples"});
    }

    return out;
}

std::string validation_report_json(const std::vector<CheckResult>& results) {
    nlohmann::json j;
    j["suite"] = "qns-validate";
    j["build"] = QNS_VERSION_STRING;
    bool all = true;
    for (const auto& r : results) {
        nlohmann::json e;
        e["name"] = r.name;
        e["measured"] = r.measured;
        e["tolerance"] = r.tolerance;
        e["pass"] = r.pass;
        e["detail"] = r.detail;
        j["checks"].push_back(e);
        all = all && r.pass;
    }
    j["all_pass"] = all;
    return j.dump(2);
}

} // namespace qns
