#ifndef ARRAYLIGHT_FARFIELD_HPP
#define ARRAYLIGHT_FARFIELD_HPP

#include <Eigen/Dense>
#include <vector>

#include "arraylight/drive.hpp"
#include "arraylight/geometry.hpp"
#include "arraylight/units.hpp"

namespace arraylight {

using Mat3 = std::array<Vec3, 3>;

// Far-field obliquity factor of the laser mode. Cos is the mirror-reflected
// collimated-beam form; SqrtCos models a realistic lens. The choice has no
// practical effect on reflectivity/transmissivity.
enum class Obliquity { Cos, SqrtCos };

// Change of basis from {x,y,z} to {R_hat, theta_hat, phi_hat}; rows are the
// spherical unit vectors in Cartesian components.
Mat3 basis_matrix(double theta, double phi);

// Laser far-field mode in spherical-basis components. Zero on the backward
// hemisphere. `scale` multiplies the whole mode (used for the exact-energy
// normalization below).
CVec3 laser_mode_F(double theta, double phi, double w0, Obliquity obliquity,
                   double scale = 1.0);

// u_D = T(theta,phi) [(R_hat x u) x R_hat]; transverse by construction.
CVec3 dipole_pattern_uD(double theta, double phi, const CVec3& u_hat);

// Continuum integral of |F|^2 over the sphere for scale = 1 (dense 1D
// Gauss-Legendre quadrature). The normalized mode uses
// scale = sqrt(A_beam / beam_mode_integral).
double beam_mode_integral(double w0, Obliquity obliquity);

// Equal-area partition of the sphere into latitude bands, band cell counts
// proportional to sin(theta) (at least one), every cell of solid angle
// exactly 4*pi/Q. Detector directions are cell centroids.
struct DetectorGrid {
    int Q = 0;
    std::vector<double> theta, phi, dOmega;
    std::vector<Vec3> R_hat, theta_hat, phi_hat;

    // populated by attach_jump_coefficients
    std::vector<Complex> L;      // [q*2+s], dimensionless
    std::vector<Complex> D;      // [q*2+s], units sqrt(Gamma)
    std::vector<Complex> phase;  // [q*N+n], exp(-i k r_n . R_hat_q)
    double sum_L2_raw = 0.0;     // grid sum of |L|^2 before grid normalization
    double sum_D2 = 0.0;
    double laser_scale = 1.0;    // continuum energy normalization of F
    Eigen::VectorXcd cross;      // c_n = sum_{q,s} conj(L) D phase_qn
    Eigen::MatrixXcd decay_grid; // K_nm = sum_{q,s} conj(phase_qn) phase_qm |D|^2
    Obliquity obliquity = Obliquity::Cos;
    double w0 = 0.0;
    int n_atoms = 0;

    bool has_coefficients() const { return !L.empty(); }
};

DetectorGrid build_grid(int Q_target);

// L_qs = -i (F . s) sqrt(dOmega/A_beam), D_qs = sqrt(3/(8 pi)) (u_D . s) sqrt(dOmega),
// phase_qn = exp(-i k r_n . R_hat_q). F carries the continuum energy
// normalization, and L is afterwards rescaled so that sum |L|^2 == 1 exactly
// (total laser detection probability over the closed detector sphere).
void attach_jump_coefficients(DetectorGrid& grid, const DriveField& drive,
                              const AtomArray& array,
                              Obliquity obliquity = Obliquity::Cos);

// |sum_{q,s} |F.s|^2 dOmega - A_beam| / A_beam for the normalized mode:
// pure quadrature residual, O(1/Q).
double check_sum_F(const DetectorGrid& grid, const DriveField& drive);

// max_nm |K_nm - Gamma_nm(closed form)| / Gamma
double check_sum_D(const DetectorGrid& grid, const AtomArray& array);

// per-atom |c_n(grid) - c_n(dense independent quadrature)| / g
std::vector<double> check_sum_LD(const DetectorGrid& grid, const DriveField& drive,
                                 const AtomArray& array);

// Independent dense quadrature (Gauss-Legendre in theta x trapezoid in phi)
// of the continuum cross integral c_n = i sqrt(3/(8 pi A_beam)) *
// int F* . u_D exp(-i k r_n . R_hat) dOmega.
Eigen::VectorXcd reference_cross_sums(const DriveField& drive, const AtomArray& array,
                                      Obliquity obliquity, int n_theta = 800,
                                      int n_phi = 512);

}  // namespace arraylight

#endif
