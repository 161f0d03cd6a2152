#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace qns {

using cxd = std::complex<double>;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RVec = Eigen::VectorXd;

// Error hierarchy. Every class names the contract it guards.
struct Error : std::runtime_error {
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

struct DimensionMismatch : Error {
    explicit DimensionMismatch(const std::string& msg) : Error("dimension mismatch: " + msg) {}
};
struct NonHermitianInput : Error {
    explicit NonHermitianInput(const std::string& msg) : Error("non-Hermitian input: " + msg) {}
};
struct DefectiveMatrix : Error {
    explicit DefectiveMatrix(const std::string& msg) : Error("defective matrix: " + msg) {}
};
struct NoSteadyState : Error {
    explicit NoSteadyState(const std::string& msg) : Error("no steady state: " + msg) {}
};
struct MultipleSteadyStates : Error {
    explicit MultipleSteadyStates(const std::string& msg) : Error("degenerate steady space: " + msg) {}
};
struct NegativeTime : Error {
    explicit NegativeTime(const std::string& msg) : Error("negative time: " + msg) {}
};
struct NonPositiveTime : Error {
    explicit NonPositiveTime(const std::string& msg) : Error("non-positive time: " + msg) {}
};
struct EqualTimes : Error {
    explicit EqualTimes(const std::string& msg) : Error("times must be strictly increasing: " + msg) {}
};
struct StateBlowup : Error {
    explicit StateBlowup(const std::string& msg) : Error("state blow-up: " + msg) {}
};
struct ImaginaryResidue : Error {
    explicit ImaginaryResidue(const std::string& msg) : Error("imaginary residue too large: " + msg) {}
};
struct InvalidArgument : Error {
    explicit InvalidArgument(const std::string& msg) : Error("invalid argument: " + msg) {}
};

// Returns v.real() after asserting the imaginary part is numerical noise.
// scale sets the magnitude against which the residue is judged; pass the
// natural size of the quantity when the value itself may be ~0.
inline double real_checked(cxd v, double scale, double rel_tol = 1e-9) {
    const double ref = std::max({std::abs(v.real()), std::abs(scale), 1e-300});
    if (std::abs(v.imag()) > rel_tol * ref)
        throw ImaginaryResidue("imag " + std::to_string(v.imag()) + " vs scale " + std::to_string(ref));
    return v.real();
}

} // namespace qns
