#include "qns/sme.hpp"

#include "qns/rng.hpp"

#include <cmath>

namespace qns {

Mat sme_step(const Mat& rho, const Mat& deterministic, const Mat& a, double beta, double dt, double dW) {
    const double tr_a = (a * rho).trace().real();
    Mat next = rho + devectorize(deterministic * vectorize(rho)) * dt;
    if (beta != 0.0) next += beta * dW * (a * rho + rho * a - 2.0 * tr_a * rho);
    if (next.norm() > 10.0) throw StateBlowup("norm " + std::to_string(next.norm()));
    next = (next + next.adjoint()) / 2.0;
    next /= next.trace().real();
    return next;
}

TrajectoryRecord simulate(const ModelBundle& model, const SimConfig& cfg) {
    if (cfg.dt <= 0) throw InvalidArgument("dt must be > 0");
    if (cfg.steps < 1) throw InvalidArgument("steps must be >= 1");

    const Liouvillian l = model.build(cfg.beta);
    const double max_rate = -l.dec.eigenvalues.real().minCoeff();
    if (cfg.dt * (2 * cfg.beta * cfg.beta + max_rate) > 0.1)
        throw InvalidArgument("dt violates the stability guard dt*(2 beta^2 + max|Re lambda|) <= 0.1");

    // Deterministic drift over one step applied exactly through the cached
    // eigendecomposition. A plain Euler drift turns the precession modes
    // into |1 + lambda dt| > e^{Re lambda dt} amplifiers and narrows every
    // spectral line by omega^2 dt / 2; the exact one-step propagator removes
    // that artifact. The stochastic kick stays the non-anticipating
    // Euler-Maruyama increment at the pre-step state.
    Mat gdt(l.dim * l.dim, l.dim * l.dim);
    {
        Vec ph(l.dec.eigenvalues.size());
        for (Eigen::Index j = 0; j < ph.size(); ++j) ph[j] = std::exp(l.dec.eigenvalues[j] * cfg.dt);
        gdt = l.dec.V * ph.asDiagonal() * l.dec.Vinv;
    }

    const Mat& a = model.A;
    Mat rho = cfg.initial_state.value_or(l.rho0);
    if (rho.rows() != model.dim || rho.cols() != model.dim)
        throw DimensionMismatch("initial state");

    TrajectoryRecord rec;
    rec.dt = cfg.dt;
    rec.beta = cfg.beta;
    rec.seed = cfg.seed;
    rec.model_hash = model_hash(model, cfg.beta);
    rec.dim = model.dim;
    rec.z.resize(size_t(cfg.steps));
    rec.min_eigenvalue_seen = 0.0;

    Xoshiro256pp rng(cfg.seed);
    const double sqrt_dt = std::sqrt(cfg.dt);
    const double b2 = cfg.beta * cfg.beta;

    if (model.dim == 2) {
        // Bloch form: rho = (1 + s.sigma)/2, A = a0 + avec.sigma. The exact
        // drift is the affine map induced by gdt; the kick reduces to
        // s += 2 beta dW (avec - (avec.s) s), and the trace stays exactly 1.
        const Mat sig[3] = {pauli_x(), pauli_y(), pauli_z()};
        const double a0 = 0.5 * a.trace().real();
        Eigen::Vector3d av;
        for (int i = 0; i < 3; ++i) av[i] = 0.5 * (sig[i] * a).trace().real();
        Eigen::Matrix3d drift;
        Eigen::Vector3d affine;
        for (int j = 0; j < 3; ++j) {
            const Mat gj = devectorize(gdt * vectorize(sig[j]));
            for (int i = 0; i < 3; ++i) drift(i, j) = 0.5 * (sig[i] * gj).trace().real();
        }
        const Mat g1 = devectorize(gdt * vectorize(Mat::Identity(2, 2)));
        for (int i = 0; i < 3; ++i) affine[i] = 0.5 * (sig[i] * g1).trace().real();

        Eigen::Vector3d s;
        for (int i = 0; i < 3; ++i) s[i] = (sig[i] * rho).trace().real();

        for (std::uint64_t k = 0; k < cfg.steps; ++k) {
            const double g = rng.next_normal();
            const double tr_a = a0 + av.dot(s);
            rec.z[size_t(k)] = b2 * tr_a + 0.5 * cfg.beta * g / sqrt_dt;

            if (cfg.record_obs_every && k % cfg.record_obs_every == 0) rec.obs.push_back(tr_a);
            if (cfg.record_rho_every && k % cfg.record_rho_every == 0)
                rec.rho_snapshots.push_back(0.5 * (Mat::Identity(2, 2) + s[0] * sig[0] + s[1] * sig[1] + s[2] * sig[2]));
            if (cfg.diag_eig_every && k % cfg.diag_eig_every == 0)
                rec.min_eigenvalue_seen = std::min(rec.min_eigenvalue_seen, 0.5 * (1.0 - s.norm()));

            Eigen::Vector3d next = drift * s + affine;
            if (cfg.beta != 0.0) next += (2.0 * cfg.beta * sqrt_dt * g) * (av - av.dot(s) * s);
            if (next.squaredNorm() > 199.0) throw StateBlowup("at step " + std::to_string(k));
            s = next;
        }
        return rec;
    }

    Eigen::SelfAdjointEigenSolver<Mat> es;
    for (std::uint64_t k = 0; k < cfg.steps; ++k) {
        const double g = rng.next_normal();
        const double tr_a = (a * rho).trace().real();
        rec.z[size_t(k)] = b2 * tr_a + 0.5 * cfg.beta * g / sqrt_dt;

        if (cfg.record_obs_every && k % cfg.record_obs_every == 0) rec.obs.push_back(tr_a);
        if (cfg.record_rho_every && k % cfg.record_rho_every == 0) rec.rho_snapshots.push_back(rho);
        if (cfg.diag_eig_every && k % cfg.diag_eig_every == 0) {
            es.compute(rho, Eigen::EigenvaluesOnly);
            rec.min_eigenvalue_seen = std::min(rec.min_eigenvalue_seen, es.eigenvalues().minCoeff());
        }

        Mat next = devectorize(gdt * vectorize(rho));
        if (cfg.beta != 0.0) next += cfg.beta * (sqrt_dt * g) * (a * rho + rho * a - 2.0 * tr_a * rho);
        if (next.norm() > 10.0) throw StateBlowup("at step " + std::to_string(k));
        next = (next + next.adjoint()) / 2.0;
        const double tr = next.trace().real();
        rec.max_trace_deviation = std::max(rec.max_trace_deviation, std::abs(tr - 1.0));
        rho = next / tr;
    }
    return rec;
}

double lemma_check(const ModelBundle& model, double beta, int n_draws, double dt, std::uint64_t seed) {
    if (n_draws < 1) throw InvalidArgument("n_draws must be >= 1");
    const Liouvillian l = model.build(beta);
    const Mat& a = model.A;
    const Mat rho = l.rho0;
    const double tr_a = (a * rho).trace().real();
    const double sqrt_dt = std::sqrt(dt);
    const Mat drift = devectorize(l.matrix * vectorize(rho)) * dt;

    Xoshiro256pp rng(seed);
    Mat acc = Mat::Zero(model.dim, model.dim);
    for (int k = 0; k < n_draws; ++k) {
        const double g = rng.next_normal();
        const double z = beta * beta * tr_a + 0.5 * beta * g / sqrt_dt;
        Mat next = rho + drift;
        if (beta != 0.0) next += beta * (sqrt_dt * g) * (a * rho + rho * a - 2.0 * tr_a * rho);
        acc += next * z;
    }
    acc /= double(n_draws);
    const Mat target = 0.5 * beta * beta * (a * rho + rho * a);
    return (acc - target).cwiseAbs().maxCoeff();
}

} // namespace qns
