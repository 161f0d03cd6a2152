#pragma once

#include "qns/liouvillian.hpp"
#include "qns/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace qns {

// Physical constants of the ZnO:In spin pair (ENDOR values), expressed as
// angular rates. Overridable through SpinPairParams.
struct SpinPairConstants {
    double ge_rad_per_sT = 0.172e12;  // electron gyromagnetic ratio g_e mu_B / hbar
    double gn_rad_per_sT = 9.329e6;   // nuclear
    double hyperfine_Hz = 100.2e6;    // A / h
    double quadrupole_Hz = 1.27e6;    // P_par / h
};

struct SingleSpinParams {
    std::array<double, 3> omega{0, 0, 0}; // angular frequencies (1/time-unit)
    double gamma = 0.0;                   // isotropic relaxation rate
};

enum class HyperfineMode { Isotropic, XOnly };

struct SpinPairParams {
    std::array<double, 3> B{0, 0, 0};   // Tesla
    double temperature = 300.0;         // Kelvin
    double gamma_e = 1.0 / 20.0;        // 1/ns
    double gamma_n = 1.0 / 20000.0;     // 1/ns
    HyperfineMode hyperfine = HyperfineMode::Isotropic;
    SpinPairConstants constants{};
    Mat rho_n_final;                    // nuclear relaxation target; empty = maximally mixed
};

struct ModelBundle {
    Mat H;
    Mat A;                              // measurement operator
    std::vector<DissipatorSpec> dissipators;
    int dim = 0;
    std::string label;
    double time_unit_seconds = 1.0;     // physical seconds per internal time unit
    std::string freq_unit;              // label of 1/(2 pi time-unit), e.g. "GHz"

    Liouvillian build(double beta_damping) const {
        return build_liouvillian(H, dissipators, A, beta_damping);
    }
};

// Single electron spin: H = (1/2) sum_j omega_j sigma_j, isotropic relaxation
// toward 1/2, measured in sigma_z.
ModelBundle single_spin_model(const SingleSpinParams& p);

// ZnO:In electron-nuclear pair (I = 9/2 nucleus first factor, s = 1/2 electron
// second). H = g_e B.s + A I.s + P I_z^2 - g_n B.I in rad/ns; electron relaxes
// toward its thermal orientation, nucleus toward the configured target.
// Measurement operator is 2 s_z (eigenvalues +-1).
ModelBundle zno_indium_model(const SpinPairParams& p);

// Deviation of the d=2 Liouvillian from the Bloch form
// ds/dt = omega x s - gamma s - 2 beta^2 diag(1,1,0) s.
double bloch_form_check(const Liouvillian& l, const std::array<double, 3>& omega, double gamma, double beta);

// FNV-1a over the model matrices and beta; identifies the computation in output files.
std::uint64_t model_hash(const ModelBundle& m, double beta);

} // namespace qns
