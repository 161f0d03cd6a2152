#include "qns/grids.hpp"
#include "qns/models.hpp"
#include "qns/polyspectra.hpp"

#include <doctest.h>

#include <cmath>

using namespace qns;

namespace {
constexpr double kTwoPi = 6.283185307179586;

// local maxima strictly above both neighbours
std::vector<int> local_maxima(const std::vector<cxd>& v) {
    std::vector<int> out;
    for (size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i].real() > v[i - 1].real() && v[i].real() > v[i + 1].real()) out.push_back(int(i));
    return out;
}
} // namespace

TEST_CASE("single spin model spectra") {
    SingleSpinParams p;
    p.omega = {1.0, 0, 0};
    p.gamma = 0.1;
    const Liouvillian l = single_spin_model(p).build(0.0);
    SpectralCache c(l);

    // peaks at +-1 with half-width gamma
    CHECK(s2(c, 1.0, 1.0, false) > s2(c, 1.2, 1.0, false));
    CHECK(s2(c, 1.0, 1.0, false) > s2(c, 0.8, 1.0, false));
    const double half = s2(c, 1.0, 1.0, false) / 2;
    CHECK(s2(c, 1.0 + p.gamma, 1.0, false) == doctest::Approx(half).epsilon(0.02));

    // omega = 0 variant: single Lorentzian 2 gamma / (w^2 + gamma^2)
    SingleSpinParams p0;
    p0.omega = {0, 0, 0};
    p0.gamma = 0.2;
    const Liouvillian l0 = single_spin_model(p0).build(0.0);
    for (double w : {0.0, 0.1, 0.5}) {
        CHECK(s2(l0, w, 1.0, false) ==
              doctest::Approx(2 * p0.gamma / (w * w + p0.gamma * p0.gamma)).epsilon(1e-9));
    }

    // undamped spin has a degenerate kernel
    SingleSpinParams pu;
    pu.omega = {1.0, 0, 0};
    pu.gamma = 0.0;
    CHECK_THROWS_AS(single_spin_model(pu).build(0.0), MultipleSteadyStates);
}

TEST_CASE("zno spectrum structure at 100 mT") {
    SpinPairParams p;
    p.B = {0.1, 0, 0};
    p.temperature = 1e4; // high-temperature limit
    const ModelBundle m = zno_indium_model(p);
    CHECK(m.dim == 20);

    // the hyperfine comb spans f_zeeman +- 4.5 A/h = 2.29..3.19 GHz
    const Liouvillian l = m.build(0.0);
    const auto grid = eval_s2_grid(l, linspace(2.2 * kTwoPi, 3.3 * kTwoPi, 2000), 1.0, false, 1);
    const auto peaks = local_maxima(grid.values);
    CHECK(peaks.size() == 10);

    // mean spacing 0.100 GHz within 2 percent
    std::vector<double> freqs;
    for (int i : peaks) freqs.push_back(grid.axis1[size_t(i)] / kTwoPi);
    double spacing = 0;
    for (size_t i = 1; i < freqs.size(); ++i) spacing += freqs[i] - freqs[i - 1];
    spacing /= double(freqs.size() - 1);
    CHECK(spacing == doctest::Approx(0.1002).epsilon(0.02));

    // electron Zeeman frequency 1.72e10 rad/s = 2.74 GHz sits mid-comb
    const double f_zeeman = 0.172e12 * 0.1 / kTwoPi * 1e-9;
    CHECK(f_zeeman == doctest::Approx(2.7375).epsilon(1e-3));
    CHECK(freqs.front() < f_zeeman);
    CHECK(freqs.back() > f_zeeman);
}

TEST_CASE("zno zero field peaks") {
    SpinPairParams p;
    p.B = {0, 0, 0};
    p.temperature = 1e4;
    const Liouvillian l = zno_indium_model(p).build(0.0);
    const auto grid = eval_s2_grid(l, linspace(1e-4, 0.7 * kTwoPi, 1400), 1.0, false, 1);

    // boundary maximum at zero frequency
    CHECK(grid.values[0].real() > grid.values[5].real());

    const auto peaks = local_maxima(grid.values);
    REQUIRE(!peaks.empty());
    // the dominant interior peak sits at (I + 1/2) A = 0.501 GHz
    int best = peaks[0];
    for (int i : peaks)
        if (grid.values[size_t(i)].real() > grid.values[size_t(best)].real()) best = i;
    CHECK(grid.axis1[size_t(best)] / kTwoPi == doctest::Approx(0.501).epsilon(0.02));
}

TEST_CASE("zno angular momentum conservation") {
    // [H - P Iz^2, Ix + sx] = 0 for isotropic hyperfine and B along x
    SpinPairParams p;
    p.B = {0.01, 0, 0};
    p.temperature = 10;
    const ModelBundle m = zno_indium_model(p);

    const SpinMatrices nuc = spin_matrices(4.5), ele = spin_matrices(0.5);
    const Mat Ix = kron(nuc.sx, Mat::Identity(2, 2));
    const Mat Iz = kron(nuc.sz, Mat::Identity(2, 2));
    const Mat sx = kron(Mat::Identity(10, 10), ele.sx);
    const double quad = kTwoPi * 1.27e6 * 1e-9;
    const Mat h_no_quad = m.H - quad * Iz * Iz;
    const Mat j = Ix + sx;
    CHECK((h_no_quad * j - j * h_no_quad).cwiseAbs().maxCoeff() < 1e-9);

    // thermal electron target is a valid density matrix at low temperature too
    SpinPairParams pc = p;
    pc.temperature = 0.01;
    const Liouvillian lc = zno_indium_model(pc).build(0.0);
    CHECK(std::abs(lc.rho0.trace().real() - 1.0) < 1e-9);
}

TEST_CASE("zno anisotropic hyperfine variant") {
    SpinPairParams p;
    p.B = {0.1, 0, 0};
    p.temperature = 10;
    p.hyperfine = HyperfineMode::XOnly;
    const ModelBundle m = zno_indium_model(p);
    // Ix and sx now commute with H separately (apart from the quadrupole term)
    const SpinMatrices nuc = spin_matrices(4.5);
    const Mat Ix = kron(nuc.sx, Mat::Identity(2, 2));
    const Mat Iz = kron(nuc.sz, Mat::Identity(2, 2));
    const double quad = kTwoPi * 1.27e6 * 1e-9;
    const Mat h_no_quad = m.H - quad * Iz * Iz;
    CHECK((h_no_quad * Ix - Ix * h_no_quad).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("bloch form check") {
    SingleSpinParams p;
    p.omega = {0.7, -0.4, 1.1};
    p.gamma = 0.3;
    const ModelBundle m = single_spin_model(p);

    CHECK(bloch_form_check(m.build(0.0), p.omega, p.gamma, 0.0) < 1e-12);

    // with measurement damping: x and y decay at 2 beta^2 extra, z unaffected
    const double beta = 0.8;
    CHECK(bloch_form_check(m.build(beta), p.omega, p.gamma, beta) < 1e-10);

    // mismatched beta must show up as a deviation of exactly 2 beta^2
    CHECK(bloch_form_check(m.build(beta), p.omega, p.gamma, 0.0) ==
          doctest::Approx(2 * beta * beta).epsilon(1e-9));
}

TEST_CASE("model hash distinguishes models") {
    SingleSpinParams a;
    a.omega = {1.0, 0, 0};
    a.gamma = 0.1;
    SingleSpinParams b = a;
    b.gamma = 0.2;
    CHECK(model_hash(single_spin_model(a), 1.0) != model_hash(single_spin_model(b), 1.0));
    CHECK(model_hash(single_spin_model(a), 1.0) != model_hash(single_spin_model(a), 2.0));
    CHECK(model_hash(single_spin_model(a), 1.0) == model_hash(single_spin_model(a), 1.0));
}
