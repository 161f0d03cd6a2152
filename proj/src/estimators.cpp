#include "qns/estimators.hpp"

#include "qns/rng.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace qns {

namespace {
constexpr double kTwoPi = 6.283185307179586;

// FFTW plan cache. Plan creation is not thread-safe; execution on
// caller-owned buffers is.
fftw_plan backward_plan(int n) {
    static std::mutex mu;
    static std::map<int, fftw_plan> plans;
    std::lock_guard<std::mutex> lock(mu);
    auto it = plans.find(n);
    if (it != plans.end()) return it->second;
    std::vector<fftw_complex> a(static_cast<size_t>(n));
    std::vector<fftw_complex> b(static_cast<size_t>(n));
    fftw_plan p = fftw_plan_dft_1d(n, a.data(), b.data(), FFTW_BACKWARD, FFTW_ESTIMATE | FFTW_UNALIGNED);
    plans[n] = p;
    return p;
}
} // namespace

double FrameSet::omega_of_bin(int k) const {
    int kk = ((k % frame_len) + frame_len) % frame_len;
    if (kk > frame_len / 2) kk -= frame_len;
    return kTwoPi * kk / (frame_len * dt);
}

int FrameSet::bin_of_omega(double omega) const {
    int k = int(std::lround(omega * frame_len * dt / kTwoPi));
    return ((k % frame_len) + frame_len) % frame_len;
}

FrameSet frame_fft(const std::vector<double>& z, double dt, const FrameSpec& spec) {
    const int n = spec.frame_len;
    if (n < 2) throw InvalidArgument("frame_len must be >= 2");
    if (z.size() < size_t(n)) throw InvalidArgument("trajectory shorter than one frame");

    std::vector<double> win(size_t(n), 1.0);
    double norm = 1.0;
    if (spec.window == Window::Hann) {
        double p = 0;
        for (int i = 0; i < n; ++i) {
            win[size_t(i)] = 0.5 * (1.0 - std::cos(kTwoPi * i / n));
            p += win[size_t(i)] * win[size_t(i)];
        }
        norm = 1.0 / std::sqrt(p / n); // restores the order-2 density scale
    }

    const size_t n_frames = z.size() / size_t(n);
    FrameSet out;
    out.frame_len = n;
    out.dt = dt;
    out.frames.reserve(n_frames);

    fftw_plan plan = backward_plan(n);
    std::vector<cxd> in(static_cast<size_t>(n));
    std::vector<cxd> buf(static_cast<size_t>(n));
    for (size_t f = 0; f < n_frames; ++f) {
        for (int i = 0; i < n; ++i)
            in[size_t(i)] = z[f * size_t(n) + size_t(i)] * win[size_t(i)] * norm;
        fftw_execute_dft(plan, reinterpret_cast<fftw_complex*>(in.data()),
                         reinterpret_cast<fftw_complex*>(buf.data()));
        Vec v(n);
        for (int i = 0; i < n; ++i) v[i] = buf[size_t(i)] * dt;
        out.frames.push_back(std::move(v));
    }
    return out;
}

SpectralEstimate1D estimate_s2(const FrameSet& frames, const FrameSpec& spec) {
    const int m = spec.m_per_group;
    if (m < 2) throw InvalidArgument("m_per_group must be >= 2");
    const int n = frames.frame_len;
    const int n_groups = int(frames.frames.size()) / m;
    if (n_groups < 1) throw InvalidArgument("not enough frames for one group");
    const double T = frames.frame_duration();

    SpectralEstimate1D est;
    est.n_groups = n_groups;
    est.omega.resize(size_t(n));
    for (int k = 0; k < n; ++k) est.omega[size_t(k)] = frames.omega_of_bin(k);

    std::vector<double> sum(size_t(n), 0), sumsq(size_t(n), 0);
    for (int g = 0; g < n_groups; ++g) {
        for (int k = 0; k < n; ++k) {
            double zz = 0;
            cxd zm = 0;
            for (int j = 0; j < m; ++j) {
                const cxd v = frames.frames[size_t(g * m + j)][k];
                zz += std::norm(v);
                zm += v;
            }
            zz /= m;
            zm /= double(m);
            const double val = double(m) / (m - 1) * (zz - std::norm(zm)) / T;
            sum[size_t(k)] += val;
            sumsq[size_t(k)] += val * val;
        }
    }
    est.value.resize(size_t(n));
    est.se.resize(size_t(n));
    for (int k = 0; k < n; ++k) {
        const double mean = sum[size_t(k)] / n_groups;
        est.value[size_t(k)] = mean;
        const double var = n_groups > 1 ? (sumsq[size_t(k)] / n_groups - mean * mean) / (n_groups - 1) : 0.0;
        est.se[size_t(k)] = std::sqrt(std::max(var, 0.0));
    }
    return est;
}

namespace {

// Bin 0 reads as zero: equivalent to subtracting each frame's time-domain
// mean, which removes the z_2 offset before the cumulant combination.

// third sample cumulant over one group
cxd sample_c3(const FrameSet& fr, int g0, int m, int b1, int b2, int b3) {
    cxd mx = 0, my = 0, mw = 0, mxy = 0, mxw = 0, myw = 0, mxyw = 0;
    for (int j = 0; j < m; ++j) {
        const Vec& f = fr.frames[size_t(g0 + j)];
        const cxd x = b1 ? f[b1] : cxd(0), y = b2 ? f[b2] : cxd(0), w = b3 ? f[b3] : cxd(0);
        mx += x; my += y; mw += w;
        mxy += x * y; mxw += x * w; myw += y * w;
        mxyw += x * y * w;
    }
    const double im = 1.0 / m;
    mx *= im; my *= im; mw *= im; mxy *= im; mxw *= im; myw *= im; mxyw *= im;
    return mxyw - mxy * mw - mxw * my - myw * mx + 2.0 * mx * my * mw;
}

// Fourth sample cumulant over one group. Plug-in products of sample moments
// carry an O(1/m) bias (for Gaussian input the naive estimator does not
// average to zero), so every product term draws its factors from disjoint
// frame subsets, symmetrized over the assignments: pair products from
// halves, pair-single-single from thirds, the quadruple single from
// quarters. Each summand is then exactly unbiased. Requires m >= 4.
struct C4Group {
    // moments of subset s (0 = all, 1..2 halves, 3..5 thirds, 6..9 quarters)
    cxd m1[10][4] = {};
    cxd m2[10][4][4] = {};
    cxd m3[10][4] = {};
    cxd m4 = 0;
    int cnt[10] = {};

    void accumulate(const cxd x[4], int j, int m) {
        const int subs[4] = {0, 1 + (j * 2) / m, 3 + (j * 3) / m, 6 + (j * 4) / m};
        for (int s : subs) {
            ++cnt[s];
            for (int a = 0; a < 4; ++a) m1[s][a] += x[a];
            for (int a = 0; a < 4; ++a)
                for (int b = a + 1; b < 4; ++b) m2[s][a][b] += x[a] * x[b];
            m3[s][0] += x[1] * x[2] * x[3];
            m3[s][1] += x[0] * x[2] * x[3];
            m3[s][2] += x[0] * x[1] * x[3];
            m3[s][3] += x[0] * x[1] * x[2];
        }
        m4 += x[0] * x[1] * x[2] * x[3];
    }

    cxd pair2(int a, int b, int s) const { return m2[s][std::min(a, b)][std::max(a, b)] / double(cnt[s]); }
    cxd one(int a, int s) const { return m1[s][a] / double(cnt[s]); }
    cxd three(int a, int s) const { return m3[s][a] / double(cnt[s]); }

    cxd value(int m) const {
        cxd s = m4 / double(m);
        // single x triple, halves symmetrized
        for (int a = 0; a < 4; ++a)
            s -= 0.5 * (one(a, 1) * three(a, 2) + one(a, 2) * three(a, 1));
        // pair x pair, halves symmetrized
        const int pairs[3][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2}};
        for (const auto& p : pairs)
            s -= 0.5 * (pair2(p[0], p[1], 1) * pair2(p[2], p[3], 2) +
                        pair2(p[0], p[1], 2) * pair2(p[2], p[3], 1));
        // pair x single x single, thirds cycled
        const int psspairs[6][4] = {{0, 1, 2, 3}, {0, 2, 1, 3}, {0, 3, 1, 2},
                                    {1, 2, 0, 3}, {1, 3, 0, 2}, {2, 3, 0, 1}};
        for (const auto& p : psspairs) {
            cxd acc = 0;
            for (int r = 0; r < 3; ++r)
                acc += pair2(p[0], p[1], 3 + r) * one(p[2], 3 + (r + 1) % 3) * one(p[3], 3 + (r + 2) % 3);
            s += 2.0 * acc / 3.0;
        }
        // four singles, quarters cycled
        cxd acc = 0;
        for (int r = 0; r < 4; ++r)
            acc += one(0, 6 + r) * one(1, 6 + (r + 1) % 4) * one(2, 6 + (r + 2) % 4) * one(3, 6 + (r + 3) % 4);
        s -= 6.0 * acc / 4.0;
        return s;
    }
};

cxd sample_c4(const FrameSet& fr, int g0, int m, int b1, int b2, int b3, int b4) {
    C4Group grp;
    for (int j = 0; j < m; ++j) {
        const Vec& f = fr.frames[size_t(g0 + j)];
        const cxd x[4] = {b1 ? f[b1] : cxd(0), b2 ? f[b2] : cxd(0), b3 ? f[b3] : cxd(0), b4 ? f[b4] : cxd(0)};
        grp.accumulate(x, j, m);
    }
    return grp.value(m);
}

} // namespace

SpectralEstimate2D estimate_s3(const FrameSet& frames, const FrameSpec& spec, int kmax) {
    const int m = spec.m_per_group;
    if (m < 2) throw InvalidArgument("m_per_group must be >= 2");
    const int n = frames.frame_len;
    if (n % 2 != 0) throw InvalidArgument("frame_len must be even so bins close under negation");
    if (kmax < 1 || kmax >= n / 2) throw InvalidArgument("kmax out of range");
    const int n_groups = int(frames.frames.size()) / m;
    if (n_groups < 1) throw InvalidArgument("not enough frames for one group");
    const double T = frames.frame_duration();

    const int nb = 2 * kmax + 1;
    SpectralEstimate2D est;
    est.n_groups = n_groups;
    est.w1.resize(size_t(nb));
    est.w2.resize(size_t(nb));
    for (int i = 0; i < nb; ++i) {
        est.w1[size_t(i)] = frames.omega_of_bin(i - kmax);
        est.w2[size_t(i)] = frames.omega_of_bin(i - kmax);
    }
    std::vector<cxd> sum(size_t(nb) * nb, 0);
    std::vector<double> sre(size_t(nb) * nb, 0), sim(size_t(nb) * nb, 0);

    auto wrap = [n](int k) { return ((k % n) + n) % n; };
    for (int g = 0; g < n_groups; ++g) {
        for (int i1 = 0; i1 < nb; ++i1) {
            const int k1 = i1 - kmax;
            for (int i2 = 0; i2 < nb; ++i2) {
                const int k2 = i2 - kmax;
                const int b1 = wrap(k1), b2 = wrap(k2), b3 = wrap(-k1 - k2);
                const cxd v = sample_c3(frames, g * m, m, b1, b2, b3) / T;
                sum[size_t(i1) * nb + i2] += v;
                sre[size_t(i1) * nb + i2] += v.real() * v.real();
                sim[size_t(i1) * nb + i2] += v.imag() * v.imag();
            }
        }
    }
    est.value.resize(size_t(nb) * nb);
    est.se_re.resize(size_t(nb) * nb);
    est.se_im.resize(size_t(nb) * nb);
    for (size_t i = 0; i < est.value.size(); ++i) {
        const cxd mean = sum[i] / double(n_groups);
        est.value[i] = mean;
        auto group_se = [&](double sq, double mu) {
            const double var = n_groups > 1 ? (sq / n_groups - mu * mu) / (n_groups - 1) : 0.0;
            return std::sqrt(std::max(var, 0.0));
        };
        est.se_re[i] = group_se(sre[i], mean.real());
        est.se_im[i] = group_se(sim[i], mean.imag());
    }
    return est;
}

ScalarEstimate estimate_s4_corr(const FrameSet& frames, const FrameSpec& spec, double w1, double w2) {
    const int m = spec.m_per_group;
    if (m < 4) throw InvalidArgument("m_per_group must be >= 4 for the unbiased fourth cumulant");
    const int n = frames.frame_len;
    if (n % 2 != 0) throw InvalidArgument("frame_len must be even so bins close under negation");
    const int k1 = frames.bin_of_omega(w1);
    const int k2 = frames.bin_of_omega(w2);
    const int mk1 = (n - k1) % n, mk2 = (n - k2) % n;
    if (k1 == 0 || k2 == 0 || k1 == k2 || k1 == mk2)
        throw InvalidArgument("estimate_s4_corr requires w1 != +-w2 and both nonzero on the grid");
    const int n_groups = int(frames.frames.size()) / m;
    if (n_groups < 1) throw InvalidArgument("not enough frames for one group");
    const double T = frames.frame_duration();

    ScalarEstimate est;
    est.n_groups = n_groups;
    double s = 0, ssq = 0, si = 0, ssqi = 0;
    for (int g = 0; g < n_groups; ++g) {
        const cxd v = sample_c4(frames, g * m, m, k1, mk1, k2, mk2) / T;
        s += v.real();
        ssq += v.real() * v.real();
        si += v.imag();
        ssqi += v.imag() * v.imag();
    }
    est.value = s / n_groups;
    est.value_im = si / n_groups;
    auto group_se = [&](double sq, double mu) {
        const double var = n_groups > 1 ? (sq / n_groups - mu * mu) / (n_groups - 1) : 0.0;
        return std::sqrt(std::max(var, 0.0));
    };
    est.se = group_se(ssq, est.value);
    est.se_im = group_se(ssqi, est.value_im);
    return est;
}

SnrResult snr_experiment(const ModelBundle& model, const SnrExperimentConfig& cfg,
                         const std::vector<int>& orders) {
    if (cfg.n_systems.size() < 2) throw InvalidArgument("need at least two ensemble sizes");
    if (cfg.n_repeats < 1) throw InvalidArgument("n_repeats must be >= 1");
    auto wants = [&](int n) { return std::find(orders.begin(), orders.end(), n) != orders.end(); };

    SnrResult out;
    for (int N : cfg.n_systems) {
        double s2_val = 0, s2_var = 0;
        double s3_val = 0, s3_var = 0;
        double s4_val = 0, s4_var = 0;
        for (int rep = 0; rep < cfg.n_repeats; ++rep) {
            // sum of N independent detectors, fixed per-system beta
            std::vector<double> z(size_t(cfg.sim.steps), 0.0);
            for (int j = 0; j < N; ++j) {
                SimConfig sc = cfg.sim;
                sc.beta = cfg.beta;
                sc.seed = substream_seed(cfg.sim.seed, (std::uint64_t(N) * 131 + std::uint64_t(rep)) * 1000003ull +
                                                          std::uint64_t(j));
                const TrajectoryRecord rec = simulate(model, sc);
                for (size_t k = 0; k < z.size(); ++k) z[k] += rec.z[k];
            }
            const FrameSet frames = frame_fft(z, cfg.sim.dt, cfg.frames);

            if (wants(2)) {
                const auto est = estimate_s2(frames, cfg.frames);
                const int k = frames.bin_of_omega(cfg.w2_target);
                s2_val += est.value[size_t(k)];
                s2_var += est.se[size_t(k)] * est.se[size_t(k)];
            }
            if (wants(3)) {
                const int kb = frames.bin_of_omega(cfg.w3_b);
                const int ka = frames.bin_of_omega(cfg.w3_a);
                const int kmax = std::max(std::abs(ka), std::abs(kb));
                const auto est = estimate_s3(frames, cfg.frames, kmax);
                const int nb = 2 * kmax + 1;
                const size_t idx = size_t(ka + kmax) * nb + size_t(kb + kmax);
                s3_val += est.value[idx].real();
                s3_var += est.se_re[idx] * est.se_re[idx];
            }
            if (wants(4)) {
                // coherent combination over the probe pairs
                for (const auto& pr : cfg.w4_pairs) {
                    const auto est = estimate_s4_corr(frames, cfg.frames, pr[0], pr[1]);
                    s4_val += est.value;
                    s4_var += est.se * est.se;
                }
            }
        }
        SnrPoint pt;
        pt.n_systems = N;
        if (wants(2)) pt.snr2 = std::abs(s2_val) / std::max(std::sqrt(s2_var), 1e-300);
        if (wants(3)) pt.snr3 = std::abs(s3_val) / std::max(std::sqrt(s3_var), 1e-300);
        if (wants(4)) pt.snr4 = std::abs(s4_val) / std::max(std::sqrt(s4_var), 1e-300);
        out.points.push_back(pt);
    }

    auto fit = [&](auto pick) {
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        int n = 0;
        for (const auto& p : out.points) {
            const double y = pick(p);
            if (!(y > 0)) continue;
            const double lx = std::log(double(p.n_systems)), ly = std::log(y);
            sx += lx; sy += ly; sxx += lx * lx; sxy += lx * ly;
            ++n;
        }
        if (n < 2) return std::nan("");
        return (n * sxy - sx * sy) / (n * sxx - sx * sx);
    };
    if (wants(2)) out.exponent2 = fit([](const SnrPoint& p) { return p.snr2; });
    if (wants(3)) out.exponent3 = fit([](const SnrPoint& p) { return p.snr3; });
    if (wants(4)) out.exponent4 = fit([](const SnrPoint& p) { return p.snr4; });
    return out;
}

} // namespace qns
