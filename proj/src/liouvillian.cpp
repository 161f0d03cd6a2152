#include "qns/liouvillian.hpp"

#include <cmath>

namespace qns {

DissipatorSpec DissipatorSpec::isotropic(int d1, int d2, int subsystem, double gamma, const Mat& rho_final) {
    if (gamma < 0) throw InvalidArgument("dissipator rate must be >= 0");
    if (subsystem != 0 && subsystem != 1) throw InvalidArgument("subsystem must be 0 or 1");
    const int dsub = subsystem == 0 ? d1 : d2;
    if (rho_final.rows() != dsub || rho_final.cols() != dsub)
        throw DimensionMismatch("rho_final does not match relaxed subsystem");
    require_hermitian(rho_final, "rho_final");
    if (std::abs(rho_final.trace().real() - 1.0) > 1e-10 || std::abs(rho_final.trace().imag()) > 1e-10)
        throw InvalidArgument("rho_final must have unit trace");
    DissipatorSpec s;
    s.kind = Kind::IsotropicRelaxation;
    s.gamma = gamma;
    s.d1 = d1;
    s.d2 = d2;
    s.subsystem = subsystem;
    s.rho_final = rho_final;
    return s;
}

DissipatorSpec DissipatorSpec::isotropic_single(int d, double gamma, const Mat& rho_final) {
    // whole system relaxes; modelled as a trivial second factor of dimension 1
    return isotropic(d, 1, 0, gamma, rho_final);
}

DissipatorSpec DissipatorSpec::custom(const Mat& matrix) {
    DissipatorSpec s;
    s.kind = Kind::Custom;
    s.matrix = matrix;
    return s;
}

Mat DissipatorSpec::to_matrix(int dim) const {
    if (kind == Kind::Custom) {
        if (matrix.rows() != Eigen::Index(dim) * dim)
            throw DimensionMismatch("custom dissipator has wrong superoperator size");
        return matrix;
    }
    if (Eigen::Index(d1) * d2 != dim)
        throw DimensionMismatch("dissipator factor dims do not match system dimension");
    return isotropic_spin_dissipator(d1, d2, subsystem, gamma, rho_final);
}

Mat isotropic_spin_dissipator(int d1, int d2, int subsystem, double gamma, const Mat& rho_final) {
    const int dim = d1 * d2;
    // reset map applied to every matrix unit E_ij
    Mat reset = Mat::Zero(Eigen::Index(dim) * dim, Eigen::Index(dim) * dim);
    Mat e = Mat::Zero(dim, dim);
    for (int j = 0; j < dim; ++j) {
        for (int i = 0; i < dim; ++i) {
            e(i, j) = 1.0;
            Mat out;
            if (d2 == 1) {
                out = rho_final * e.trace();
            } else if (subsystem == 1) {
                out = kron(partial_trace(e, d1, d2, Keep::First), rho_final);
            } else {
                out = kron(rho_final, partial_trace(e, d1, d2, Keep::Second));
            }
            reset.col(Eigen::Index(j) * dim + i) = vectorize(out);
            e(i, j) = 0.0;
        }
    }
    return -gamma * (Mat::Identity(Eigen::Index(dim) * dim, Eigen::Index(dim) * dim) - reset);
}

Mat a_super_apply(const Mat& a, double offset, const Mat& x) {
    if (a.rows() != x.rows() || a.cols() != x.cols())
        throw DimensionMismatch("a_super_apply");
    return (a * x + x * a) / 2.0 - offset * x;
}

Liouvillian build_liouvillian(const Mat& h, const std::vector<DissipatorSpec>& dissipators,
                              const Mat& a, double beta) {
    convention_self_test();
    if (h.rows() != h.cols() || a.rows() != a.cols() || h.rows() != a.rows())
        throw DimensionMismatch("build_liouvillian: H and A must be square and equal-dimensional");
    require_hermitian(h, "H");
    require_hermitian(a, "A");
    if (beta < 0) throw InvalidArgument("beta must be >= 0");

    const int d = int(h.rows());
    const Mat id = Mat::Identity(d, d);

    Mat L = cxd(0, -1) * (sandwich_superop(h, id) - sandwich_superop(id, h));
    for (const auto& spec : dissipators) L += spec.to_matrix(d);
    if (beta > 0) {
        const Mat a2 = a * a;
        L += beta * beta *
             (sandwich_superop(a, a) - 0.5 * sandwich_superop(a2, id) - 0.5 * sandwich_superop(id, a2));
    }

    Liouvillian l;
    l.dim = d;
    l.matrix = L;
    l.beta = beta;
    l.A = a;
    l.dec = eig_general(L);

    // trace preservation: the trace functional must annihilate L
    const double lnorm = std::max(L.norm(), 1e-300);
    const Vec trace_row = (vectorize(id).transpose() * L).transpose();
    if (trace_row.norm() > 1e-9 * lnorm)
        throw Error("Liouvillian is not trace-preserving");

    int m = -1;
    l.rho0 = steady_state_from(l.dec, &m);
    l.dec.steady_index = m;
    l.a_mean = real_checked((a * l.rho0).trace(), a.cwiseAbs().maxCoeff());

    // all non-steady modes must decay
    const double scale = l.dec.eigenvalues.cwiseAbs().maxCoeff();
    for (Eigen::Index j = 0; j < l.dec.eigenvalues.size(); ++j) {
        if (int(j) == m) continue;
        if (l.dec.eigenvalues[j].real() > 1e-9 * std::max(scale, 1e-300))
            throw Error("non-steady eigenvalue with positive real part");
    }
    if ((L * vectorize(l.rho0)).norm() > 1e-9 * lnorm)
        throw Error("steady state does not annihilate the Liouvillian");

    return l;
}

Mat steady_state_from(const SpectralDecomposition& dec, int* steady_index_out) {
    const Vec& w = dec.eigenvalues;
    const double scale = w.cwiseAbs().maxCoeff();
    const double tol = std::max(1e-9 * scale, 1e-12);
    int m = -1;
    int hits = 0;
    for (Eigen::Index j = 0; j < w.size(); ++j) {
        if (std::abs(w[j]) <= tol) {
            ++hits;
            if (m < 0) m = int(j);
        }
    }
    if (hits == 0) throw NoSteadyState("no eigenvalue within " + std::to_string(tol));
    if (hits > 1) throw MultipleSteadyStates(std::to_string(hits) + " eigenvalues within tolerance");

    Mat rho = devectorize(dec.V.col(m));
    // the eigenvector carries an arbitrary complex phase; divide by the
    // complex trace first, then hermitize the numerical remainder
    const cxd tr = rho.trace();
    if (std::abs(tr) < 1e-14) throw NoSteadyState("steady eigenvector is traceless");
    rho /= tr;
    rho = (rho + rho.adjoint()) / 2.0;

    Eigen::SelfAdjointEigenSolver<Mat> es(rho);
    if (es.eigenvalues().minCoeff() < -1e-8)
        throw Error("steady state not positive semi-definite (min eig " +
                    std::to_string(es.eigenvalues().minCoeff()) + ")");

    if (steady_index_out) *steady_index_out = m;
    return rho;
}

Vec Liouvillian::propagate_vec(double t, const Vec& v) const {
    if (t < 0) throw NegativeTime("propagate");
    if (t == 0) return v;
    Vec c = dec.Vinv * v;
    for (Eigen::Index j = 0; j < c.size(); ++j) c[j] *= std::exp(dec.eigenvalues[j] * t);
    return dec.V * c;
}

Mat Liouvillian::propagate(double t, const Mat& x) const {
    if (t == 0) return x;
    return devectorize(propagate_vec(t, vectorize(x)));
}

Vec Liouvillian::gprime_apply_time_vec(double t, const Vec& v) const {
    if (t <= 0) throw NonPositiveTime("gprime_apply_time");
    Vec c = dec.Vinv * v;
    const int m = steady();
    for (Eigen::Index j = 0; j < c.size(); ++j)
        c[j] = (int(j) == m) ? cxd(0) : c[j] * std::exp(dec.eigenvalues[j] * t);
    return dec.V * c;
}

Mat Liouvillian::gprime_apply_time(double t, const Mat& x) const {
    return devectorize(gprime_apply_time_vec(t, vectorize(x)));
}

Vec Liouvillian::gprime_apply_freq_vec(double omega, const Vec& v) const {
    Vec c = dec.Vinv * v;
    const int m = steady();
    for (Eigen::Index j = 0; j < c.size(); ++j)
        c[j] = (int(j) == m) ? cxd(0) : c[j] / (-dec.eigenvalues[j] - cxd(0, omega));
    return dec.V * c;
}

Mat Liouvillian::gprime_apply_freq(double omega, const Mat& x) const {
    return devectorize(gprime_apply_freq_vec(omega, vectorize(x)));
}

} // namespace qns
