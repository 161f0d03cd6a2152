#pragma once

#include "qns/types.hpp"

#include <vector>

namespace qns {

// Dense complex operator substrate. Vectorization is column-stacking:
// entry (i,j) of X maps to slot j*d+i, so vec(A X B) = (B^T kron A) vec(X).
// This convention is fixed globally; convention_self_test() asserts it.

Mat kron(const Mat& a, const Mat& b);

Vec vectorize(const Mat& x);
Mat devectorize(const Vec& v);

// Matrix of the map X -> l*X*r under the vectorize convention, i.e. r^T kron l.
Mat sandwich_superop(const Mat& l, const Mat& r);

enum class Keep { First, Second };
Mat partial_trace(const Mat& x, int d1, int d2, Keep keep);

bool is_hermitian(const Mat& x, double tol = 1e-10);
void require_hermitian(const Mat& x, const std::string& name, double tol = 1e-10);

Mat pauli_x();
Mat pauli_y();
Mat pauli_z();

struct SpinMatrices {
    Mat sx, sy, sz;
};
// Spin operators for spin j (dimension 2j+1), basis |j,j>, |j,j-1>, ..., |j,-j>.
SpinMatrices spin_matrices(double j);

// One-off check that kron/vectorize/sandwich agree on vec(AXB) = (B^T kron A) vec X.
// Throws Error if the convention is broken. Runs once per process.
void convention_self_test();

} // namespace qns
