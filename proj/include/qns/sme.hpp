#pragma once

#include "qns/models.hpp"
#include "qns/types.hpp"

#include <cstdint>
#include <optional>
#include <vector>

namespace qns {

struct SimConfig {
    double dt = 1e-3;
    std::uint64_t steps = 1000;
    std::uint64_t seed = 0;
    double beta = 0.0;
    std::uint64_t record_obs_every = 0;   // record Tr(A rho) every k steps (0 = off)
    std::uint64_t record_rho_every = 0;   // keep density-matrix snapshots (0 = off)
    std::uint64_t diag_eig_every = 0;     // min-eigenvalue diagnostic cadence (0 = off)
    std::optional<Mat> initial_state;     // default: steady state of the deterministic part
};

struct TrajectoryRecord {
    double dt = 0;
    double beta = 0;
    std::uint64_t seed = 0;
    std::uint64_t model_hash = 0;
    int dim = 0;
    std::vector<double> z;                // detector samples
    std::vector<double> obs;              // Tr(A rho) at record_obs_every cadence
    std::vector<Mat> rho_snapshots;
    // diagnostics
    double max_trace_deviation = 0;       // |Tr rho' - 1| before renormalization
    double min_eigenvalue_seen = 0;
};

// One Ito step: rho' = rho + (L rho) dt + beta (A rho + rho A - 2 rho Tr(rho A)) dW,
// stochastic coefficient at the pre-step rho, then hermitize and renormalize.
// deterministic is the superoperator matrix of L (including measurement damping).
Mat sme_step(const Mat& rho, const Mat& deterministic, const Mat& a, double beta, double dt, double dW);

// Seeded Ito integration of the full nonlinear SME. The deterministic drift
// is applied exactly over each step (one-step propagator from the cached
// eigendecomposition); the stochastic kick is the Euler-Maruyama increment
// evaluated at the pre-step state. z_k = beta^2 Tr(rho_k A) +
// (beta/2) g_k / sqrt(dt) with the same g_k driving the state update.
TrajectoryRecord simulate(const ModelBundle& model, const SimConfig& cfg);

// Monte-Carlo check of <rho(t+dt) z(t)> = (beta^2/2)(A rho + rho A); returns
// the max-norm deviation, expected O(n^-1/2) + O(dt).
double lemma_check(const ModelBundle& model, double beta, int n_draws, double dt, std::uint64_t seed);

} // namespace qns
