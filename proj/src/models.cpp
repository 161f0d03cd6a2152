#include "qns/models.hpp"

#include <cmath>

namespace qns {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kBoltzmannOverHbar_radPerNsK = 130.92086; // k_B / hbar * 1e-9
} // namespace

ModelBundle single_spin_model(const SingleSpinParams& p) {
    if (p.gamma < 0) throw InvalidArgument("gamma must be >= 0");
    ModelBundle m;
    m.dim = 2;
    m.H = 0.5 * (p.omega[0] * pauli_x() + p.omega[1] * pauli_y() + p.omega[2] * pauli_z());
    m.A = pauli_z();
    if (p.gamma > 0)
        m.dissipators.push_back(DissipatorSpec::isotropic_single(2, p.gamma, Mat::Identity(2, 2) / 2.0));
    m.label = "single-spin";
    m.time_unit_seconds = 1.0;
    m.freq_unit = "1/time-unit";
    return m;
}

ModelBundle zno_indium_model(const SpinPairParams& p) {
    if (p.temperature <= 0) throw InvalidArgument("temperature must be > 0");
    if (p.gamma_e < 0 || p.gamma_n < 0) throw InvalidArgument("relaxation rates must be >= 0");

    const SpinMatrices nuc = spin_matrices(4.5); // I = 9/2, dim 10
    const SpinMatrices ele = spin_matrices(0.5);
    const int dn = 10, de = 2, d = dn * de;
    const Mat idn = Mat::Identity(dn, dn), ide = Mat::Identity(de, de);

    auto lift_n = [&](const Mat& x) { return kron(x, ide); };
    auto lift_e = [&](const Mat& x) { return kron(idn, x); };

    // all rates in rad/ns
    const double ge = p.constants.ge_rad_per_sT * 1e-9;
    const double gn = p.constants.gn_rad_per_sT * 1e-9;
    const double hyper = 2 * kPi * p.constants.hyperfine_Hz * 1e-9;
    const double quad = 2 * kPi * p.constants.quadrupole_Hz * 1e-9;

    const Mat Ix = lift_n(nuc.sx), Iy = lift_n(nuc.sy), Iz = lift_n(nuc.sz);
    const Mat sx = lift_e(ele.sx), sy = lift_e(ele.sy), sz = lift_e(ele.sz);

    Mat H = ge * (p.B[0] * sx + p.B[1] * sy + p.B[2] * sz);
    if (p.hyperfine == HyperfineMode::Isotropic)
        H += hyper * (Ix * sx + Iy * sy + Iz * sz);
    else
        H += hyper * (Ix * sx);
    H += quad * (Iz * Iz);
    H -= gn * (p.B[0] * Ix + p.B[1] * Iy + p.B[2] * Iz);

    // thermal electron orientation exp(-g_e B.s / kT)
    const double kT = kBoltzmannOverHbar_radPerNsK * p.temperature;
    Mat he = ge * (p.B[0] * ele.sx + p.B[1] * ele.sy + p.B[2] * ele.sz);
    Eigen::SelfAdjointEigenSolver<Mat> es(he);
    Mat rho_e = Mat::Zero(de, de);
    {
        // subtract the ground energy before exponentiating
        const double e0 = es.eigenvalues().minCoeff();
        Vec boltz(de);
        for (int k = 0; k < de; ++k) boltz[k] = std::exp(-(es.eigenvalues()[k] - e0) / kT);
        rho_e = es.eigenvectors() * boltz.asDiagonal() * es.eigenvectors().adjoint();
        rho_e /= rho_e.trace().real();
    }

    Mat rho_n = p.rho_n_final.size() ? p.rho_n_final : Mat(Mat::Identity(dn, dn) / double(dn));

    ModelBundle m;
    m.dim = d;
    m.H = H;
    m.A = 2.0 * sz; // sigma_z on the electron factor
    if (p.gamma_e > 0) m.dissipators.push_back(DissipatorSpec::isotropic(dn, de, 1, p.gamma_e, rho_e));
    if (p.gamma_n > 0) m.dissipators.push_back(DissipatorSpec::isotropic(dn, de, 0, p.gamma_n, rho_n));
    m.label = p.hyperfine == HyperfineMode::Isotropic ? "zno-indium" : "zno-indium-xhyperfine";
    m.time_unit_seconds = 1e-9;
    m.freq_unit = "GHz";
    return m;
}

double bloch_form_check(const Liouvillian& l, const std::array<double, 3>& omega, double gamma, double beta) {
    if (l.dim != 2) throw DimensionMismatch("bloch_form_check needs a 2-dimensional system");
    const Mat sig[3] = {pauli_x(), pauli_y(), pauli_z()};

    // linear part of the s-vector dynamics extracted from L
    Eigen::Matrix3d got, want;
    for (int j = 0; j < 3; ++j) {
        const Mat lx = devectorize(l.matrix * vectorize(sig[j]));
        for (int i = 0; i < 3; ++i) got(i, j) = 0.5 * (sig[i] * lx).trace().real();
    }
    const double wx = omega[0], wy = omega[1], wz = omega[2];
    want << 0, -wz, wy, wz, 0, -wx, -wy, wx, 0;
    want -= gamma * Eigen::Matrix3d::Identity();
    want(0, 0) -= 2 * beta * beta;
    want(1, 1) -= 2 * beta * beta;

    double dev = (got - want).cwiseAbs().maxCoeff();

    // the identity component must not drive the spin
    const Mat l1 = devectorize(l.matrix * vectorize(Mat::Identity(2, 2)));
    for (int i = 0; i < 3; ++i) dev = std::max(dev, std::abs(0.5 * (sig[i] * l1).trace().real()));
    return dev;
}

std::uint64_t model_hash(const ModelBundle& m, double beta) {
    std::uint64_t h = 1469598103934665603ull;
    auto fnv = [&h](const void* data, size_t len) {
        const auto* p = static_cast<const unsigned char*>(data);
        for (size_t i = 0; i < len; ++i) {
            h ^= p[i];
            h *= 1099511628211ull;
        }
    };
    auto fnv_mat = [&](const Mat& x) { fnv(x.data(), sizeof(cxd) * size_t(x.size())); };
    fnv_mat(m.H);
    fnv_mat(m.A);
    for (const auto& dspec : m.dissipators) {
        const int k = int(dspec.kind);
        fnv(&k, sizeof k);
        fnv(&dspec.gamma, sizeof dspec.gamma);
        if (dspec.kind == DissipatorSpec::Kind::Custom)
            fnv_mat(dspec.matrix);
        else
            fnv_mat(dspec.rho_final);
    }
    fnv(&beta, sizeof beta);
    return h;
}

} // namespace qns
