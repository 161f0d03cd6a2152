#pragma once

#include "qns/eig.hpp"
#include "qns/operators.hpp"
#include "qns/types.hpp"

#include <vector>

namespace qns {

// Dissipator specification. Either an isotropic relaxation of one tensor
// factor toward a fixed equilibrium state, or an explicit superoperator.
struct DissipatorSpec {
    enum class Kind { IsotropicRelaxation, Custom };
    Kind kind = Kind::Custom;

    // IsotropicRelaxation fields
    double gamma = 0.0;
    int d1 = 0, d2 = 0;        // tensor factor dimensions; d1*d2 = dim (d2 = 1 for no factor)
    int subsystem = 0;         // which factor relaxes (0 = first, 1 = second)
    Mat rho_final;             // equilibrium state on that factor, unit trace

    // Custom field
    Mat matrix;

    static DissipatorSpec isotropic(int d1, int d2, int subsystem, double gamma, const Mat& rho_final);
    static DissipatorSpec isotropic_single(int d, double gamma, const Mat& rho_final);
    static DissipatorSpec custom(const Mat& matrix);

    Mat to_matrix(int dim) const;
};

// Superoperator of rho -> -gamma [ rho - reset(rho) ] where reset replaces the
// chosen tensor factor by rho_final and keeps the other via partial trace.
Mat isotropic_spin_dissipator(int d1, int d2, int subsystem, double gamma, const Mat& rho_final);

// Full Liouvillian with cached spectral decomposition and steady state.
// matrix = -i(H x . - . x H) + sum D + beta^2 (A . A - {A^2, .}/2), hbar = 1.
struct Liouvillian {
    int dim = 0;
    Mat matrix;                 // d^2 x d^2
    double beta = 0.0;          // measurement strength baked into the damping term
    SpectralDecomposition dec;
    Mat rho0;
    Mat A;
    double a_mean = 0.0;        // Tr(A rho0)

    int steady() const { return *dec.steady_index; }

    // e^{L t} x for t >= 0; NegativeTime for t < 0; exact identity at t = 0.
    Mat propagate(double t, const Mat& x) const;
    Vec propagate_vec(double t, const Vec& v) const;

    // G'(t) x = e^{L t} x - rho0 Tr(x), t > 0 required.
    Mat gprime_apply_time(double t, const Mat& x) const;
    Vec gprime_apply_time_vec(double t, const Vec& v) const;

    // G'(omega) x with diagonal elements 1/(-lam_j - i omega), steady mode zeroed.
    Mat gprime_apply_freq(double omega, const Mat& x) const;
    Vec gprime_apply_freq_vec(double omega, const Vec& v) const;
};

Liouvillian build_liouvillian(const Mat& h, const std::vector<DissipatorSpec>& dissipators,
                              const Mat& a, double beta);

// Steady state extraction used by build_liouvillian; exposed for testing.
Mat steady_state_from(const SpectralDecomposition& dec, int* steady_index_out);

// (a x + x a)/2 - offset x. offset = 0 gives the measurement superoperator A,
// offset = Tr(A rho0) gives the modified operator A'.
Mat a_super_apply(const Mat& a, double offset, const Mat& x);

} // namespace qns
