#include "qns/polyspectra.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace qns {

namespace {

void require_strictly_increasing(const std::vector<double>& times) {
    if (times.empty()) throw InvalidArgument("need at least one time");
    for (size_t k = 1; k < times.size(); ++k) {
        if (times[k] == times[k - 1]) throw EqualTimes("t[" + std::to_string(k) + "]");
        if (times[k] < times[k - 1]) throw InvalidArgument("times must be sorted ascending");
    }
}

// permutation tables, generated once
const std::array<std::array<int, 3>, 6>& perms3() {
    static const std::array<std::array<int, 3>, 6> p = {{{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};
    return p;
}

const std::array<std::array<int, 4>, 24>& perms4() {
    static const auto p = [] {
        std::array<std::array<int, 4>, 24> out{};
        std::array<int, 4> idx = {0, 1, 2, 3};
        int n = 0;
        do {
            out[n++] = idx;
        } while (std::next_permutation(idx.begin(), idx.end()));
        return out;
    }();
    return p;
}

// small fixed-capacity frequency-keyed memo; grid points reuse partial sums
template <typename T, int N>
struct FreqMemo {
    int n = 0;
    std::array<double, N> key{};
    std::array<T, N> val{};

    template <typename F>
    const T& get(double k, F&& make) {
        for (int i = 0; i < n; ++i)
            if (key[i] == k) return val[i];
        if (n == N) throw Error("frequency memo overflow");
        key[n] = k;
        val[n] = make(k);
        return val[n++];
    }
};

template <typename T, int N>
struct FreqMemo2 {
    int n = 0;
    std::array<std::pair<double, double>, N> key{};
    std::array<T, N> val{};

    template <typename F>
    const T& get(double k1, double k2, F&& make) {
        for (int i = 0; i < n; ++i)
            if (key[i].first == k1 && key[i].second == k2) return val[i];
        if (n == N) throw Error("frequency memo overflow");
        key[n] = {k1, k2};
        val[n] = make();
        return val[n++];
    }
};

} // namespace

SpectralCache::SpectralCache(const Liouvillian& liou) : l(&liou) {
    m = liou.steady();
    lam = liou.dec.eigenvalues;
    const int d = liou.dim;
    const Mat id = Mat::Identity(d, d);
    const Mat aprime = liou.A - liou.a_mean * id;

    // row functional Tr[(A - <A>) X] = vec(aprime^T)^T vec(X)
    f = (vectorize(aprime.transpose()).transpose() * liou.dec.V).transpose();
    v = liou.dec.Vinv * vectorize(a_super_apply(liou.A, liou.a_mean, liou.rho0));

    const Mat asup = 0.5 * (sandwich_superop(liou.A, id) + sandwich_superop(id, liou.A)) -
                     liou.a_mean * Mat::Identity(Eigen::Index(d) * d, Eigen::Index(d) * d);
    Mp = liou.dec.Vinv * asup * liou.dec.V;

    q = f.cwiseProduct(v);
}

cxd SpectralCache::q_hat(double omega) const {
    cxd s = 0;
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        if (int(j) == m) continue;
        s += q[j] / (-lam[j] - cxd(0, omega));
    }
    return s;
}

cxd SpectralCache::q_tau(double tau) const {
    cxd s = 0;
    for (Eigen::Index j = 0; j < q.size(); ++j) {
        if (int(j) == m) continue;
        s += q[j] * std::exp(lam[j] * tau);
    }
    return s;
}

double moment_multitime(const Liouvillian& l, const std::vector<double>& times, double beta,
                        const Mat& initial_state) {
    require_strictly_increasing(times);
    const size_t n = times.size();
    const double scale = std::pow(beta, 2.0 * double(n));
    if (n == 1) return scale * real_checked((l.A * initial_state).trace(), l.A.cwiseAbs().maxCoeff());

    Mat x = a_super_apply(l.A, 0.0, initial_state);
    for (size_t k = 1; k < n; ++k) {
        x = l.propagate(times[k] - times[k - 1], x);
        if (k + 1 < n) x = a_super_apply(l.A, 0.0, x);
    }
    const cxd tr = (l.A * x).trace();
    return scale * real_checked(tr, l.A.cwiseAbs().maxCoeff());
}

double moment_multitime(const Liouvillian& l, const std::vector<double>& times, double beta) {
    return moment_multitime(l, times, beta, l.rho0);
}

static cxd chain3(const SpectralCache& c, double g21, double g32) {
    // Tr[A' G'(g32) A' G'(g21) A' rho0] in the eigenbasis
    Vec x = c.v;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] = (int(j) == c.m) ? cxd(0) : x[j] * std::exp(c.lam[j] * g21);
    x = c.Mp * x;
    cxd s = 0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        if (int(j) != c.m) s += c.f[j] * std::exp(c.lam[j] * g32) * x[j];
    return s;
}

static cxd chain4(const SpectralCache& c, double g21, double g32, double g43) {
    Vec x = c.v;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] = (int(j) == c.m) ? cxd(0) : x[j] * std::exp(c.lam[j] * g21);
    x = c.Mp * x;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        x[j] = (int(j) == c.m) ? cxd(0) : x[j] * std::exp(c.lam[j] * g32);
    x = c.Mp * x;
    cxd s = 0;
    for (Eigen::Index j = 0; j < x.size(); ++j)
        if (int(j) != c.m) s += c.f[j] * std::exp(c.lam[j] * g43) * x[j];
    return s;
}

double cumulant3_time(const SpectralCache& c, double t1, double t2, double t3, double beta) {
    if (!(t1 < t2 && t2 < t3)) throw EqualTimes("cumulant3_time needs t1 < t2 < t3");
    const cxd val = chain3(c, t2 - t1, t3 - t2);
    // residue judged against the tau -> 0 magnitude, not the (decaying) value
    const double scale = c.q.cwiseAbs().sum() * (1.0 + c.Mp.cwiseAbs().maxCoeff());
    return std::pow(beta, 6.0) * real_checked(val, scale);
}

double cumulant3_time(const Liouvillian& l, double t1, double t2, double t3, double beta) {
    SpectralCache c(l);
    return cumulant3_time(c, t1, t2, t3, beta);
}

double cumulant4_time(const SpectralCache& c, double t1, double t2, double t3, double t4, double beta) {
    if (!(t1 < t2 && t2 < t3 && t3 < t4)) throw EqualTimes("cumulant4_time needs t1 < t2 < t3 < t4");
    const cxd chain = chain4(c, t2 - t1, t3 - t2, t4 - t3);
    const cxd corr = c.q_tau(t4 - t2) * c.q_tau(t3 - t1) + c.q_tau(t4 - t1) * c.q_tau(t3 - t2);
    const cxd val = chain - corr;
    const double qs = c.q.cwiseAbs().sum();
    const double scale = qs * (1.0 + c.Mp.cwiseAbs().maxCoeff()) * (1.0 + c.Mp.cwiseAbs().maxCoeff()) + qs * qs;
    return std::pow(beta, 8.0) * real_checked(val, scale);
}

double cumulant4_time(const Liouvillian& l, double t1, double t2, double t3, double t4, double beta) {
    SpectralCache c(l);
    return cumulant4_time(c, t1, t2, t3, t4, beta);
}

double cumulant_from_moments(const Liouvillian& l, const std::vector<double>& times, double beta, int n) {
    require_strictly_increasing(times);
    if (int(times.size()) != n) throw InvalidArgument("times length must equal order n");

    auto mom = [&](std::initializer_list<int> ix) {
        std::vector<double> sub;
        for (int i : ix) sub.push_back(times[size_t(i)]);
        return moment_multitime(l, sub, beta);
    };

    switch (n) {
        case 2:
            return mom({0, 1}) - mom({0}) * mom({1});
        case 3:
            return mom({0, 1, 2}) - mom({0, 1}) * mom({2}) - mom({0, 2}) * mom({1}) - mom({1, 2}) * mom({0}) +
                   2 * mom({0}) * mom({1}) * mom({2});
        case 4: {
            double s = mom({0, 1, 2, 3});
            s -= mom({0}) * mom({1, 2, 3}) + mom({1}) * mom({0, 2, 3}) + mom({2}) * mom({0, 1, 3}) +
                 mom({3}) * mom({0, 1, 2});
            s -= mom({0, 1}) * mom({2, 3}) + mom({0, 2}) * mom({1, 3}) + mom({0, 3}) * mom({1, 2});
            s += 2 * (mom({0, 1}) * mom({2}) * mom({3}) + mom({0, 2}) * mom({1}) * mom({3}) +
                      mom({0, 3}) * mom({1}) * mom({2}) + mom({1, 2}) * mom({0}) * mom({3}) +
                      mom({1, 3}) * mom({0}) * mom({2}) + mom({2, 3}) * mom({0}) * mom({1}));
            s -= 6 * mom({0}) * mom({1}) * mom({2}) * mom({3});
            return s;
        }
        default:
            throw InvalidArgument("cumulant_from_moments supports n in {2,3,4}");
    }
}

double s2(const SpectralCache& c, double omega, double beta, bool include_shot_noise) {
    const cxd v = c.q_hat(omega) + c.q_hat(-omega);
    const double b2 = beta * beta, b4 = b2 * b2;
    double out = b4 * real_checked(v, std::abs(c.q_hat(omega)) + std::abs(c.q_hat(-omega)) + 1e-30);
    if (include_shot_noise) out += b2 / 4.0;
    return out;
}

double s2(const Liouvillian& l, double omega, double beta, bool include_shot_noise) {
    SpectralCache c(l);
    return s2(c, omega, beta, include_shot_noise);
}

cxd s3(const SpectralCache& c, double w1, double w2, double beta) {
    const double w[3] = {w1, w2, -w1 - w2};
    const Eigen::Index K = c.lam.size();

    // v1 keyed by the innermost resolvent frequency wb + wc = -wa
    FreqMemo<Vec, 3> v1memo;
    cxd tot = 0;
    for (const auto& p : perms3()) {
        const double wa = w[p[0]], wc = w[p[2]]; // inner resolvent carries wb + wc = -wa
        const Vec& v1 = v1memo.get(-wa, [&](double nu) {
            Vec x = c.v;
            for (Eigen::Index j = 0; j < K; ++j)
                x[j] = (int(j) == c.m) ? cxd(0) : x[j] / (-c.lam[j] - cxd(0, nu));
            return Vec(c.Mp * x);
        });
        cxd s = 0;
        for (Eigen::Index j = 0; j < K; ++j)
            if (int(j) != c.m) s += c.f[j] / (-c.lam[j] - cxd(0, wc)) * v1[j];
        tot += s;
    }
    return std::pow(beta, 6.0) * tot;
}

cxd s3(const Liouvillian& l, double w1, double w2, double beta) {
    SpectralCache c(l);
    return s3(c, w1, w2, beta);
}

namespace {

// F (nu1,nu2,nu3)  = sum_{jk} q_j q_k / [(-l_j - i nu1)(-l_j - l_k - i nu2)(-l_k - i nu3)]
// F'(nu1,nu2,nu3)  = sum_{jk} q_j q_k / [(-l_j - i nu1)(-l_j - l_k - i nu2)(-l_j - i nu3)]
// These are the Fourier transforms of the pair products Q(t4-t2)Q(t3-t1) and
// Q(t4-t1)Q(t3-t2) over the ordered time simplex. The inner (j,k) structures
// are memoized on their frequency arguments across the 24 permutations.
struct S4Work {
    const SpectralCache& c;
    explicit S4Work(const SpectralCache& cache) : c(cache) {}

    FreqMemo<Vec, 4> v1memo;             // chain stage 1, keyed by -wa
    FreqMemo2<Vec, 12> v2memo;           // chain stage 2, keyed by (-wa, -wa-wb)
    FreqMemo2<Vec, 12> gkmemo;           // F inner vector, keyed by (nu1, nu2)
    FreqMemo<Vec, 8> hjmemo;             // F' inner vector h_j(nu2)

    Vec resolvent(const Vec& x, double nu) const {
        Vec y = x;
        for (Eigen::Index j = 0; j < y.size(); ++j)
            y[j] = (int(j) == c.m) ? cxd(0) : y[j] / (-c.lam[j] - cxd(0, nu));
        return y;
    }

    // wc enters only through the memo keys: wb + wc + wd = -wa and wc + wd = -wa - wb
    cxd term_chain(double wa, double wb, double wd) {
        const Vec& v1 = v1memo.get(-wa, [&](double nu) { return Vec(c.Mp * resolvent(c.v, nu)); });
        const Vec& v2 = v2memo.get(-wa, -wa - wb, [&]() { return Vec(c.Mp * resolvent(v1, -wa - wb)); });
        cxd s = 0;
        for (Eigen::Index j = 0; j < v2.size(); ++j)
            if (int(j) != c.m) s += c.f[j] / (-c.lam[j] - cxd(0, wd)) * v2[j];
        return s;
    }

    cxd term_F(double nu1, double nu2, double nu3) {
        const Eigen::Index K = c.lam.size();
        const Vec& gk = gkmemo.get(nu1, nu2, [&]() {
            Vec out = Vec::Zero(K);
            for (Eigen::Index k = 0; k < K; ++k) {
                if (int(k) == c.m) continue;
                cxd s = 0;
                for (Eigen::Index j = 0; j < K; ++j) {
                    if (int(j) == c.m) continue;
                    s += c.q[j] / ((-c.lam[j] - cxd(0, nu1)) * (-c.lam[j] - c.lam[k] - cxd(0, nu2)));
                }
                out[k] = s;
            }
            return out;
        });
        cxd s = 0;
        for (Eigen::Index k = 0; k < K; ++k)
            if (int(k) != c.m) s += gk[k] * c.q[k] / (-c.lam[k] - cxd(0, nu3));
        return s;
    }

    cxd term_Fp(double nu1, double nu2, double nu3) {
        const Eigen::Index K = c.lam.size();
        const Vec& hj = hjmemo.get(nu2, [&](double nu) {
            Vec out = Vec::Zero(K);
            for (Eigen::Index j = 0; j < K; ++j) {
                if (int(j) == c.m) continue;
                cxd s = 0;
                for (Eigen::Index k = 0; k < K; ++k) {
                    if (int(k) == c.m) continue;
                    s += c.q[k] / (-c.lam[j] - c.lam[k] - cxd(0, nu));
                }
                out[j] = s;
            }
            return out;
        });
        cxd s = 0;
        for (Eigen::Index j = 0; j < K; ++j)
            if (int(j) != c.m)
                s += c.q[j] / ((-c.lam[j] - cxd(0, nu1)) * (-c.lam[j] - cxd(0, nu3))) * hj[j];
        return s;
    }
};

} // namespace

cxd s4(const SpectralCache& c, double w1, double w2, double w3, double beta, double* term_scale) {
    const double w[4] = {w1, w2, w3, -w1 - w2 - w3};
    S4Work work(c);
    cxd tot = 0;
    double scale = 0;
    for (const auto& p : perms4()) {
        const double wa = w[p[0]], wb = w[p[1]], wd = w[p[3]];
        // canonical forms of the partial sums (the four frequencies add to
        // zero, and two-term sums are rounding-stable) so memo keys coincide
        // across permutations
        const double nu1 = -wa, nu2 = -wa - wb, nu3 = wd;
        const cxd chain = work.term_chain(wa, wb, wd);
        const cxd corr = work.term_F(nu1, nu2, nu3) + work.term_Fp(nu1, nu2, nu3);
        tot += chain - corr;
        scale += std::abs(chain) + std::abs(corr);
    }
    const double b8 = std::pow(beta, 8.0);
    if (term_scale) *term_scale = b8 * scale;
    return b8 * tot;
}

cxd s4(const Liouvillian& l, double w1, double w2, double w3, double beta) {
    SpectralCache c(l);
    return s4(c, w1, w2, w3, beta);
}

double s4_correlation_cut(const SpectralCache& c, double w1, double w2, double beta) {
    double scale = 0;
    const cxd v = s4(c, w1, -w1, w2, beta, &scale);
    return real_checked(v, scale);
}

double s4_correlation_cut(const Liouvillian& l, double w1, double w2, double beta) {
    SpectralCache c(l);
    return s4_correlation_cut(c, w1, w2, beta);
}

double gq_autocorrelation(const Liouvillian& l, double tau) {
    const Mat aprime = l.A - l.a_mean * Mat::Identity(l.dim, l.dim);
    const Mat x = l.propagate(std::abs(tau), a_super_apply(l.A, 0.0, l.rho0));
    return real_checked((aprime * x).trace(), l.A.cwiseAbs().maxCoeff());
}

double integrated_noise_check(const Liouvillian& l, double beta, double omega_max, int n_points) {
    if (n_points < 3) throw InvalidArgument("need at least 3 integration points");
    SpectralCache c(l);
    const double b4 = std::pow(beta, 4.0);
    const double h = 2 * omega_max / (n_points - 1);
    double acc = 0;
    for (int k = 0; k < n_points; ++k) {
        const double w = -omega_max + k * h;
        const double val = s2(c, w, 1.0, false);
        acc += (k == 0 || k == n_points - 1) ? 0.5 * val : val;
    }
    return b4 * acc * h;
}

ZenoEstimate zeno_strength_estimate(double peak_height_ratio, double gamma, double p) {
    if (peak_height_ratio <= 0 || gamma <= 0 || p <= 0 || p > 1)
        throw InvalidArgument("zeno_strength_estimate: need a > 0, gamma > 0, p in (0,1]");
    ZenoEstimate z;
    z.beta_squared = p * gamma * peak_height_ratio;
    z.gamma_m_x = 2 * z.beta_squared;
    return z;
}

cxd susceptibility(const Liouvillian& l, double omega) {
    const Mat commutator = l.A * l.rho0 - l.rho0 * l.A;
    // Tr[A rho0 - rho0 A] = 0, so the steady mode carries no weight and the
    // resolvent of the full propagator reduces to G'(omega).
    const Mat x = l.gprime_apply_freq(omega, commutator);
    return cxd(0, 1) * (l.A * x).trace();
}

double fdt_residual(const Liouvillian& l, double omega, double temperature) {
    const double sq = s2(l, omega, 1.0, false);
    return susceptibility(l, omega).imag() - sq * std::tanh(omega / (2 * temperature));
}

} // namespace qns
