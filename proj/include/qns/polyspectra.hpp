#pragma once

#include "qns/liouvillian.hpp"
#include "qns/types.hpp"

#include <vector>

namespace qns {

// Eigenbasis quantities reused by every spectrum evaluation. Built once per
// Liouvillian, read-only afterwards, safe to share across parallel workers.
//
//   f   = row functional of Tr[(A - <A>) . ] in the eigenbasis
//   v   = vec(A' rho0) in the eigenbasis
//   Mp  = superoperator of A' (x -> (Ax+xA)/2 - <A> x) in the eigenbasis
//   q_j = f_j v_j, the mode weights of the two-point function
//         Q(tau) = Tr[A' G'(tau) A' rho0] = sum_j q_j e^{lam_j tau}
struct SpectralCache {
    explicit SpectralCache(const Liouvillian& l);

    const Liouvillian* l;
    int m;          // steady mode index
    Vec lam;        // eigenvalues
    Vec f, v, q;
    Mat Mp;

    // Q^(omega) = int_0^inf Q(tau) e^{i omega tau} dtau, steady mode excluded.
    cxd q_hat(double omega) const;
    // Q(tau) for tau >= 0.
    cxd q_tau(double tau) const;
};

// --- multi-time moments and cumulants (beta^{2n} prefactors applied) ---

// <z(t_n)...z(t_1)> = beta^{2n} Tr[A G(t_n-t_{n-1}) A ... G(t_2-t_1) A rho0].
// Times must be strictly increasing; n >= 1.
double moment_multitime(const Liouvillian& l, const std::vector<double>& times, double beta);

// Same chain evaluated from an explicit initial state instead of rho0; the
// result is linear in that argument.
double moment_multitime(const Liouvillian& l, const std::vector<double>& times, double beta,
                        const Mat& initial_state);

// C3 for t1 < t2 < t3: beta^6 Tr[A' G'(t3-t2) A' G'(t2-t1) A' rho0]
// (the only permutation that survives strict time order).
double cumulant3_time(const Liouvillian& l, double t1, double t2, double t3, double beta);

// C4 for t1 < t2 < t3 < t4:
//   beta^8 { Tr[A' G'(t4-t3) A' G'(t3-t2) A' G'(t2-t1) A' rho0]
//            - Q(t4-t2) Q(t3-t1) - Q(t4-t1) Q(t3-t2) }.
// The two pair products complete the bare chain term; without them the
// expression does not reproduce the cumulant assembled from moments.
double cumulant4_time(const Liouvillian& l, double t1, double t2, double t3, double t4, double beta);

// Independent oracle: assembles C_n (n = 2,3,4) from moment_multitime over all
// partitions of the time set. Times must be strictly increasing.
double cumulant_from_moments(const Liouvillian& l, const std::vector<double>& times, double beta, int n);

// Fast variants evaluating through a prebuilt cache (grid usage).
double cumulant3_time(const SpectralCache& c, double t1, double t2, double t3, double beta);
double cumulant4_time(const SpectralCache& c, double t1, double t2, double t3, double t4, double beta);

// --- frequency-domain polyspectra ---

// S^(2)(omega) = beta^4 (Q^(omega) + Q^(-omega)) + beta^2/4 if include_shot_noise.
double s2(const Liouvillian& l, double omega, double beta, bool include_shot_noise);
double s2(const SpectralCache& c, double omega, double beta, bool include_shot_noise);

// S^(3)(w1,w2) = beta^6 sum over the 6 permutations of (w1,w2,-w1-w2) of
//   Tr[A' G'(wc) A' G'(wb+wc) A' rho0].
cxd s3(const Liouvillian& l, double w1, double w2, double beta);
cxd s3(const SpectralCache& c, double w1, double w2, double beta);

// S^(4)(w1,w2,w3) = beta^8 sum over the 24 permutations of (w1,w2,w3,w4) of
//   Tr[A' G'(wd) A' G'(wc+wd) A' G'(wb+wc+wd) A' rho0]
//   - FT of the pair products subtracted in cumulant4_time.
// term_scale, when given, receives the summed magnitude of all permutation
// terms: the natural yardstick for imaginary leakage after cancellation.
cxd s4(const Liouvillian& l, double w1, double w2, double w3, double beta);
cxd s4(const SpectralCache& c, double w1, double w2, double w3, double beta,
       double* term_scale = nullptr);

// Correlation cut s4(w1, -w1, w2); real by symmetry of the permutation sum.
double s4_correlation_cut(const Liouvillian& l, double w1, double w2, double beta);
double s4_correlation_cut(const SpectralCache& c, double w1, double w2, double beta);

// --- diagnostics ---

// G_q(tau) = Tr[(A - <A>) G(|tau|) A rho0]; even in tau.
double gq_autocorrelation(const Liouvillian& l, double tau);

// trapezoid of beta^4 S_q over [-omega_max, omega_max]; approaches
// 2 pi beta^4 (Tr(rho0 A^2) - Tr(rho0 A)^2).
double integrated_noise_check(const Liouvillian& l, double beta, double omega_max, int n_points);

struct ZenoEstimate {
    double beta_squared;
    double gamma_m_x;
};
// beta^2 = p * gamma * a, gamma^M_x = 2 beta^2.
ZenoEstimate zeno_strength_estimate(double peak_height_ratio, double gamma, double p);

// Complex susceptibility alpha(omega) = i Tr(A G(omega) [A rho0 - rho0 A]), hbar = 1.
cxd susceptibility(const Liouvillian& l, double omega);

// Im alpha(omega) - S_q(omega) tanh(omega / (2 T)), with k_B = hbar = 1.
double fdt_residual(const Liouvillian& l, double omega, double temperature);

} // namespace qns
