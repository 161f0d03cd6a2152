#include "qns/eig.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>
#include <vector>

namespace qns {

static double one_norm(const Mat& m) {
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

SpectralDecomposition eig_general(const Mat& m) {
    if (m.rows() != m.cols())
        throw DimensionMismatch("eig_general: matrix not square");

    Eigen::ComplexEigenSolver<Mat> solver(m, /*computeEigenvectors=*/true);
    if (solver.info() != Eigen::Success)
        throw Error("eig_general: eigensolver did not converge");

    const Vec w = solver.eigenvalues();
    const Mat V = solver.eigenvectors();

    std::vector<int> order(w.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        if (w[a].real() != w[b].real()) return w[a].real() > w[b].real();
        return std::abs(w[a].imag()) < std::abs(w[b].imag());
    });

    SpectralDecomposition d;
    d.eigenvalues.resize(w.size());
    d.V.resize(V.rows(), V.cols());
    for (Eigen::Index k = 0; k < w.size(); ++k) {
        d.eigenvalues[k] = w[order[k]];
        d.V.col(k) = V.col(order[k]);
    }

    Eigen::PartialPivLU<Mat> lu(d.V);
    d.Vinv = lu.inverse();
    d.condition_estimate = one_norm(d.V) * one_norm(d.Vinv);
    if (!std::isfinite(d.condition_estimate) || d.condition_estimate > 1e12)
        throw DefectiveMatrix("cond(V) estimate " + std::to_string(d.condition_estimate));

    const double mnorm = m.norm();
    const double resid = (d.V * d.eigenvalues.asDiagonal() * d.Vinv - m).norm();
    if (resid > 1e-8 * std::max(mnorm, 1e-300))
        throw DefectiveMatrix("reconstruction residual " + std::to_string(resid / std::max(mnorm, 1e-300)));

    return d;
}

} // namespace qns
