#ifndef ARRAYLIGHT_COUPLINGS_HPP
#define ARRAYLIGHT_COUPLINGS_HPP

#include <Eigen/Dense>

#include "arraylight/geometry.hpp"
#include "arraylight/units.hpp"

namespace arraylight {

// Closed-form pairwise coefficients (dyadic Green's function), xi = 2 pi r,
// a = |u_hat . r_hat|^2:
//   Gamma_nm = (3/2) [ (1-a) sin(xi)/xi + (1-3a)(cos(xi)/xi^2 - sin(xi)/xi^3) ]
//   Delta_nm = (3/4) [ -(1-a) cos(xi)/xi + (1-3a)(sin(xi)/xi^2 + cos(xi)/xi^3) ]
// Gamma(r=0) = Gamma, Delta(r=0) = 0 (free-space Lamb shift absorbed into the
// detuning). Coincident atoms are rejected upstream (AtomArray::finalize).
double decay_coeff(const Vec3& r_nm, const CVec3& u_hat);
double dipole_shift(const Vec3& r_nm, const CVec3& u_hat);

// In-plane pair with the default circular polarization: a = 1/2 for any
// separation direction.
double decay_coeff(const Vec2& rn, const Vec2& rm);
double dipole_shift(const Vec2& rn, const Vec2& rm);

struct Couplings {
    Eigen::MatrixXcd Delta;  // real symmetric, stored complex for convenience
    Eigen::MatrixXcd Gamma;  // real symmetric positive semidefinite
};

Couplings build_couplings(const AtomArray& array);

// Eigendecomposition of Gamma_nm: collective source modes with rates gamma_k
// and orthonormal coefficient vectors (columns of V).
struct SourceModes {
    Eigen::VectorXd rates;
    Eigen::MatrixXd vectors;
};

SourceModes source_modes(const AtomArray& array);

}  // namespace arraylight

#endif
