#include "arraylight/couplings.hpp"

#include <cmath>
#include <stdexcept>

namespace arraylight {

namespace {

double projection(const Vec3& r_nm, const CVec3& u_hat, double r) {
    Complex dot(0.0);
    for (int c = 0; c < 3; ++c) dot += u_hat[c] * (r_nm[c] / r);
    return std::norm(dot);  // a = |u_hat . r_hat|^2
}

Vec3 pair_vec(const Vec2& rn, const Vec2& rm) {
    return {rn[0] - rm[0], rn[1] - rm[1], 0.0};
}

}  // namespace

double decay_coeff(const Vec3& r_nm, const CVec3& u_hat) {
    const double r = std::sqrt(r_nm[0] * r_nm[0] + r_nm[1] * r_nm[1] + r_nm[2] * r_nm[2]);
    if (r < 1e-12) return 1.0;  // Gamma_nn = Gamma
    const double a = projection(r_nm, u_hat, r);
    const double xi = 2.0 * pi * r;
    return 1.5 * ((1.0 - a) * std::sin(xi) / xi +
                  (1.0 - 3.0 * a) * (std::cos(xi) / (xi * xi) -
                                     std::sin(xi) / (xi * xi * xi)));
}

double dipole_shift(const Vec3& r_nm, const CVec3& u_hat) {
    const double r = std::sqrt(r_nm[0] * r_nm[0] + r_nm[1] * r_nm[1] + r_nm[2] * r_nm[2]);
    if (r < 1e-12)
        throw std::invalid_argument("dipole_shift: coincident atoms");
    const double a = projection(r_nm, u_hat, r);
    const double xi = 2.0 * pi * r;
    return 0.75 * (-(1.0 - a) * std::cos(xi) / xi +
                   (1.0 - 3.0 * a) * (std::sin(xi) / (xi * xi) +
                                      std::cos(xi) / (xi * xi * xi)));
}

double decay_coeff(const Vec2& rn, const Vec2& rm) {
    return decay_coeff(pair_vec(rn, rm), AtomArray::circular_polarization());
}

double dipole_shift(const Vec2& rn, const Vec2& rm) {
    const Vec3 r = pair_vec(rn, rm);
    if (std::hypot(r[0], r[1]) < 1e-12) return 0.0;  // diagonal of build_couplings
    return dipole_shift(r, AtomArray::circular_polarization());
}

Couplings build_couplings(const AtomArray& array) {
    const int N = array.size();
    Couplings c;
    c.Delta = Eigen::MatrixXcd::Zero(N, N);
    c.Gamma = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            c.Delta(n, m) = dipole_shift(array.positions[n], array.positions[m]);
            c.Gamma(n, m) = decay_coeff(array.positions[n], array.positions[m]);
        }
    }
    return c;
}

SourceModes source_modes(const AtomArray& array) {
    const int N = array.size();
    Eigen::MatrixXd G(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            G(n, m) = decay_coeff(array.positions[n], array.positions[m]);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(G);
    SourceModes s;
    s.rates = es.eigenvalues();
    s.vectors = es.eigenvectors();
    // clip tiny negative rates from roundoff
    for (int k = 0; k < N; ++k) s.rates[k] = std::max(s.rates[k], 0.0);
    return s;
}

}  // namespace arraylight
