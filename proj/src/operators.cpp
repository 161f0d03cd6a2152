#include "qns/operators.hpp"

#include <cmath>
#include <mutex>

namespace qns {

Mat kron(const Mat& a, const Mat& b) {
    Mat c(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            c.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return c;
}

Vec vectorize(const Mat& x) {
    // Eigen is column-major, so the raw storage already column-stacks.
    return Eigen::Map<const Vec>(x.data(), x.size());
}

Mat devectorize(const Vec& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
    if (d * d != v.size())
        throw DimensionMismatch("devectorize: length " + std::to_string(v.size()) + " is not a perfect square");
    return Eigen::Map<const Mat>(v.data(), d, d);
}

Mat sandwich_superop(const Mat& l, const Mat& r) {
    if (l.rows() != l.cols() || r.rows() != r.cols() || l.rows() != r.rows())
        throw DimensionMismatch("sandwich_superop: need square operators of equal dimension");
    return kron(r.transpose(), l);
}

Mat partial_trace(const Mat& x, int d1, int d2, Keep keep) {
    if (x.rows() != x.cols() || x.rows() != Eigen::Index(d1) * d2)
        throw DimensionMismatch("partial_trace: dims (" + std::to_string(d1) + "," + std::to_string(d2) +
                                ") do not factor operator of size " + std::to_string(x.rows()));
    if (keep == Keep::First) {
        Mat r = Mat::Zero(d1, d1);
        for (int i = 0; i < d1; ++i)
            for (int j = 0; j < d1; ++j)
                for (int k = 0; k < d2; ++k)
                    r(i, j) += x(i * d2 + k, j * d2 + k);
        return r;
    }
    Mat r = Mat::Zero(d2, d2);
    for (int i = 0; i < d2; ++i)
        for (int j = 0; j < d2; ++j)
            for (int k = 0; k < d1; ++k)
                r(i, j) += x(k * d2 + i, k * d2 + j);
    return r;
}

bool is_hermitian(const Mat& x, double tol) {
    if (x.rows() != x.cols()) return false;
    const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
    return (x - x.adjoint()).cwiseAbs().maxCoeff() <= tol * scale;
}

void require_hermitian(const Mat& x, const std::string& name, double tol) {
    if (!is_hermitian(x, tol))
        throw NonHermitianInput(name);
}

Mat pauli_x() {
    Mat m(2, 2);
    m << 0, 1, 1, 0;
    return m;
}

Mat pauli_y() {
    Mat m(2, 2);
    m << 0, cxd(0, -1), cxd(0, 1), 0;
    return m;
}

Mat pauli_z() {
    Mat m(2, 2);
    m << 1, 0, 0, -1;
    return m;
}

SpinMatrices spin_matrices(double j) {
    const int dim = static_cast<int>(std::llround(2 * j + 1));
    if (std::abs(2 * j + 1 - dim) > 1e-12 || dim < 1)
        throw InvalidArgument("spin_matrices: j must be a non-negative half-integer");
    Mat sp = Mat::Zero(dim, dim); // raising operator in the m-descending basis
    for (int k = 1; k < dim; ++k) {
        const double m = j - k; // S+|j,m> = sqrt(j(j+1)-m(m+1)) |j,m+1>
        sp(k - 1, k) = std::sqrt(j * (j + 1) - m * (m + 1));
    }
    SpinMatrices s;
    s.sx = (sp + sp.adjoint()) / 2.0;
    s.sy = (sp - sp.adjoint()) / cxd(0, 2);
    s.sz = Mat::Zero(dim, dim);
    for (int k = 0; k < dim; ++k) s.sz(k, k) = j - k;
    return s;
}

void convention_self_test() {
    static std::once_flag flag;
    std::call_once(flag, [] {
        Mat a(3, 3), x(3, 3), b(3, 3);
        for (int i = 0; i < 9; ++i) {
            a(i / 3, i % 3) = cxd(0.3 * i - 1, 0.1 * i);
            x(i / 3, i % 3) = cxd(std::sin(1.0 + i), std::cos(2.0 + i));
            b(i / 3, i % 3) = cxd(0.2 * i, -0.05 * i * i);
        }
        const Vec lhs = sandwich_superop(a, b) * vectorize(x);
        const Vec rhs = vectorize(a * x * b);
        if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-12)
            throw Error("vectorize/sandwich convention self-test failed");
    });
}

} // namespace qns
