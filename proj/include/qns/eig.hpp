#pragma once

#include "qns/types.hpp"

#include <optional>

namespace qns {

// Right-eigendecomposition M = V diag(lam) V^-1 of a general complex matrix.
// Eigenvalues are sorted by descending real part, ties by ascending |Im|,
// which puts a Lindbladian's steady mode first.
struct SpectralDecomposition {
    Vec eigenvalues;
    Mat V;
    Mat Vinv;
    std::optional<int> steady_index; // set by liouvillian construction
    double condition_estimate = 0.0; // ||V||_1 * ||Vinv||_1
};

// Throws DefectiveMatrix when cond(V) exceeds 1e12 (numerically non-diagonalizable).
SpectralDecomposition eig_general(const Mat& m);

} // namespace qns
