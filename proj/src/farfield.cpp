#include "arraylight/farfield.hpp"

#include <algorithm>

#include "arraylight/couplings.hpp"
#include <cmath>
#include <stdexcept>

namespace arraylight {

namespace {

// Gauss-Legendre nodes/weights on [-1, 1] by Newton iteration.
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    x.assign(n, 0.0);
    w.assign(n, 0.0);
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(pi * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (z * p0 - p1) / (z * z - 1.0);
            const double dz = p0 / pp;
            z -= dz;
            if (std::abs(dz) < 1e-15) break;
        }
        x[i] = -z;
        x[n - 1 - i] = z;
        w[i] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[n - 1 - i] = w[i];
    }
}

double obliquity_factor(double theta, Obliquity obliquity) {
    const double c = std::cos(theta);
    return (obliquity == Obliquity::Cos) ? c : std::sqrt(c);
}

// |F|^2 at scale = 1, integrated over phi (the polarization is a unit
// vector, so the phi integral is trivial).
double mode_intensity(double theta, double w0, Obliquity obliquity) {
    if (theta >= pi / 2.0) return 0.0;
    const double obl = obliquity_factor(theta, obliquity);
    const double zR = pi * w0 * w0;  // Rayleigh range, lambda = 1
    const double amp = zR / obl;
    const double arg = pi * w0 * std::tan(theta);
    return amp * amp * std::exp(-2.0 * arg * arg);
}

}  // namespace

Mat3 basis_matrix(double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    Mat3 T;
    T[0] = {st * cp, st * sp, ct};    // R_hat
    T[1] = {ct * cp, ct * sp, -st};   // theta_hat
    T[2] = {-sp, cp, 0.0};            // phi_hat
    return T;
}

CVec3 laser_mode_F(double theta, double phi, double w0, Obliquity obliquity,
                   double scale) {
    if (theta >= pi / 2.0) return {Complex(0), Complex(0), Complex(0)};
    const double obl = obliquity_factor(theta, obliquity);
    const double zR = pi * w0 * w0;
    const double arg = pi * w0 * std::tan(theta);
    const double amp = scale * (zR / obl) * std::exp(-arg * arg);
    // polarization carried over from the focal plane: u_L = T(0, phi) u
    const Mat3 T0 = basis_matrix(0.0, phi);
    const CVec3 u = AtomArray::circular_polarization();
    CVec3 F;
    for (int r = 0; r < 3; ++r) {
        Complex acc(0.0, 0.0);
        for (int c = 0; c < 3; ++c) acc += T0[r][c] * u[c];
        F[r] = amp * acc;
    }
    return F;
}

CVec3 dipole_pattern_uD(double theta, double phi, const CVec3& u_hat) {
    const Mat3 T = basis_matrix(theta, phi);
    const Vec3& R = T[0];
    Complex uR(0.0, 0.0);
    for (int c = 0; c < 3; ++c) uR += u_hat[c] * R[c];
    CVec3 perp;
    for (int c = 0; c < 3; ++c) perp[c] = u_hat[c] - uR * R[c];
    CVec3 out;
    for (int r = 0; r < 3; ++r) {
        Complex acc(0.0, 0.0);
        for (int c = 0; c < 3; ++c) acc += T[r][c] * perp[c];
        out[r] = acc;
    }
    return out;
}

double beam_mode_integral(double w0, Obliquity obliquity) {
    // integrand support is theta in [0, pi/2), decays like exp(-2(pi w0 tan)^2)
    const double t_max = std::sqrt(40.0) / (pi * w0);
    const double theta_cap = std::min(std::atan(t_max), pi / 2.0 - 1e-12);
    std::vector<double> x, w;
    gauss_legendre(400, x, w);
    double sum = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        const double theta = 0.5 * theta_cap * (x[i] + 1.0);
        sum += w[i] * mode_intensity(theta, w0, obliquity) * std::sin(theta);
    }
    return sum * 0.5 * theta_cap * 2.0 * pi;
}

DetectorGrid build_grid(int Q_target) {
    if (Q_target < 2)
        throw std::invalid_argument("build_grid: need at least 2 cells");
    // Band layout: counts m_b ~ sin(theta_b) * sqrt(pi * Q), clamped >= 1,
    // over n_bands ~ sqrt(pi * Q / 4) rings per hemisphere (mirrored), then
    // band boundaries recomputed in u = cos(theta) so that every cell gets
    // solid angle exactly 4 pi / Q_actual.
    const int half_bands = std::max(1, (int)std::lround(std::sqrt(pi * Q_target) / 2.0));
    const int n_bands = 2 * half_bands;
    std::vector<int> counts(n_bands);
    long total = 0;
    for (int b = 0; b < half_bands; ++b) {
        const double theta_c = (b + 0.5) * (pi / 2.0) / half_bands;
        const int m = std::max(1, (int)std::lround(std::sin(theta_c) *
                                                   std::sqrt(pi * Q_target)));
        counts[b] = m;
        counts[n_bands - 1 - b] = m;
        total += 2 * m;
    }
    DetectorGrid g;
    g.Q = (int)total;
    const double dA = 4.0 * pi / total;
    g.theta.reserve(total);
    g.phi.reserve(total);
    g.dOmega.assign(total, dA);
    double u_hi = 1.0;  // running cos(theta) boundary from the north pole
    for (int b = 0; b < n_bands; ++b) {
        const double u_lo = u_hi - counts[b] * dA / (2.0 * pi);
        const double u_mid = 0.5 * (u_hi + u_lo);
        const double theta = std::acos(std::clamp(u_mid, -1.0, 1.0));
        const double dphi = 2.0 * pi / counts[b];
        for (int j = 0; j < counts[b]; ++j) {
            g.theta.push_back(theta);
            g.phi.push_back((j + 0.5) * dphi);
        }
        u_hi = u_lo;
    }
    g.R_hat.resize(total);
    g.theta_hat.resize(total);
    g.phi_hat.resize(total);
    for (long q = 0; q < total; ++q) {
        const Mat3 T = basis_matrix(g.theta[q], g.phi[q]);
        g.R_hat[q] = T[0];
        g.theta_hat[q] = T[1];
        g.phi_hat[q] = T[2];
    }
    return g;
}

void attach_jump_coefficients(DetectorGrid& grid, const DriveField& drive,
                              const AtomArray& array, Obliquity obliquity) {
    const int Q = grid.Q;
    const int N = array.size();
    grid.obliquity = obliquity;
    grid.w0 = drive.w0;
    grid.n_atoms = N;
    grid.laser_scale = std::sqrt(drive.A_beam / beam_mode_integral(drive.w0, obliquity));
    grid.L.assign(2 * (size_t)Q, Complex(0));
    grid.D.assign(2 * (size_t)Q, Complex(0));
    grid.phase.assign((size_t)Q * N, Complex(0));

    const Complex mi(0.0, -1.0);
    const double dcoef = std::sqrt(3.0 / (8.0 * pi));
    const double k = 2.0 * pi;
    double sumL2 = 0.0, sumD2 = 0.0;
    for (int q = 0; q < Q; ++q) {
        const double sqdO = std::sqrt(grid.dOmega[q]);
        const CVec3 F = laser_mode_F(grid.theta[q], grid.phi[q], drive.w0, obliquity,
                                     grid.laser_scale);
        const CVec3 uD = dipole_pattern_uD(grid.theta[q], grid.phi[q], array.u_hat);
        // s = 0: theta_hat component, s = 1: phi_hat component
        for (int s = 0; s < 2; ++s) {
            const Complex Ls = mi * F[s + 1] * sqdO / std::sqrt(drive.A_beam);
            const Complex Ds = dcoef * uD[s + 1] * sqdO;
            grid.L[2 * (size_t)q + s] = Ls;
            grid.D[2 * (size_t)q + s] = Ds;
            sumL2 += std::norm(Ls);
            sumD2 += std::norm(Ds);
        }
        const Vec3& R = grid.R_hat[q];
        for (int n = 0; n < N; ++n) {
            const double dot = array.positions[n][0] * R[0] + array.positions[n][1] * R[1];
            grid.phase[(size_t)q * N + n] = std::polar(1.0, -k * dot);
        }
    }
    grid.sum_L2_raw = sumL2;
    grid.sum_D2 = sumD2;
    // exact photon-number normalization on the closed detector sphere
    const double renorm = 1.0 / std::sqrt(sumL2);
    for (auto& Ls : grid.L) Ls *= renorm;

    grid.cross = Eigen::VectorXcd::Zero(N);
    grid.decay_grid = Eigen::MatrixXcd::Zero(N, N);
    for (int q = 0; q < Q; ++q) {
        const Complex LD = std::conj(grid.L[2 * (size_t)q]) * grid.D[2 * (size_t)q] +
                           std::conj(grid.L[2 * (size_t)q + 1]) * grid.D[2 * (size_t)q + 1];
        const double D2 = std::norm(grid.D[2 * (size_t)q]) +
                          std::norm(grid.D[2 * (size_t)q + 1]);
        for (int n = 0; n < N; ++n) {
            const Complex pn = grid.phase[(size_t)q * N + n];
            grid.cross[n] += LD * pn;
            for (int m = 0; m < N; ++m)
                grid.decay_grid(n, m) += D2 * std::conj(pn) * grid.phase[(size_t)q * N + m];
        }
    }
}

double check_sum_F(const DetectorGrid& grid, const DriveField& drive) {
    if (!grid.has_coefficients())
        throw std::runtime_error("check_sum_F: attach_jump_coefficients first");
    (void)drive;
    return std::abs(grid.sum_L2_raw - 1.0);
}

double check_sum_D(const DetectorGrid& grid, const AtomArray& array) {
    if (!grid.has_coefficients())
        throw std::runtime_error("check_sum_D: attach_jump_coefficients first");
    const int N = array.size();
    double worst = 0.0;
    for (int n = 0; n < N; ++n) {
        for (int m = 0; m < N; ++m) {
            const double ref = decay_coeff(array.positions[n], array.positions[m]);
            worst = std::max(worst, std::abs(grid.decay_grid(n, m).real() - ref));
            worst = std::max(worst, std::abs(grid.decay_grid(n, m).imag()));
        }
    }
    return worst;
}

std::vector<double> check_sum_LD(const DetectorGrid& grid, const DriveField& drive,
                                 const AtomArray& array) {
    if (!grid.has_coefficients())
        throw std::runtime_error("check_sum_LD: attach_jump_coefficients first");
    const Eigen::VectorXcd ref = reference_cross_sums(drive, array, grid.obliquity);
    std::vector<double> out(array.size());
    for (int n = 0; n < array.size(); ++n)
        out[n] = std::abs(grid.cross[n] - ref[n]) / drive.g;
    return out;
}

Eigen::VectorXcd reference_cross_sums(const DriveField& drive, const AtomArray& array,
                                      Obliquity obliquity, int n_theta, int n_phi) {
    const int N = array.size();
    const double scale = std::sqrt(drive.A_beam / beam_mode_integral(drive.w0, obliquity));
    const double t_max = std::sqrt(40.0) / (pi * drive.w0);
    const double theta_cap = std::min(std::atan(t_max), pi / 2.0 - 1e-12);
    std::vector<double> x, w;
    gauss_legendre(n_theta, x, w);
    const double dphi = 2.0 * pi / n_phi;
    const double dcoef = std::sqrt(3.0 / (8.0 * pi));
    const double k = 2.0 * pi;
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(N);
    for (int i = 0; i < n_theta; ++i) {
        const double theta = 0.5 * theta_cap * (x[i] + 1.0);
        const double wt = w[i] * 0.5 * theta_cap * std::sin(theta) * dphi;
        for (int j = 0; j < n_phi; ++j) {
            const double phi = (j + 0.5) * dphi;
            const CVec3 F = laser_mode_F(theta, phi, drive.w0, obliquity, scale);
            const CVec3 uD = dipole_pattern_uD(theta, phi, array.u_hat);
            // conj(L) D = i conj(F.s) sqrt(3/(8 pi)) (uD.s) / sqrt(A_beam) dOmega
            const Complex LD = Complex(0.0, 1.0) * dcoef / std::sqrt(drive.A_beam) *
                               (std::conj(F[1]) * uD[1] + std::conj(F[2]) * uD[2]);
            const Mat3 T = basis_matrix(theta, phi);
            for (int n = 0; n < N; ++n) {
                const double dot = array.positions[n][0] * T[0][0] +
                                   array.positions[n][1] * T[0][1];
                c[n] += wt * LD * std::polar(1.0, -k * dot);
            }
        }
    }
    return c;
}

}  // namespace arraylight
