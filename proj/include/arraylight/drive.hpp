#ifndef ARRAYLIGHT_DRIVE_HPP
#define ARRAYLIGHT_DRIVE_HPP

#include <vector>

#include "arraylight/geometry.hpp"
#include "arraylight/units.hpp"

namespace arraylight {

// Driving-beam parameters, internal units (Gamma = 1, lambda = 1).
// A_beam = pi w0^2 / 2, A_atom = 3 lambda^2 / (2 pi),
// vartheta = A_atom / (4 A_beam), g = sqrt(vartheta), alpha = Omega / (2 g).
struct DriveField {
    Complex Omega{0.0, 0.0};
    double w0 = 0.0;
    double A_beam = 0.0;
    double A_atom = 0.0;
    double vartheta = 0.0;
    double g = 0.0;
    Complex alpha{0.0, 0.0};
    std::vector<double> f;  // per-atom Gaussian mode weights

    double photon_flux() const { return std::norm(alpha); }
};

// f_n = exp(-(x^2+y^2)/w0^2)
double gaussian_weight(const Vec2& position, double w0);

DriveField derive_drive(Complex Omega, double w0, const AtomArray& array);

// theta_inf = lambda / (pi w0)
double divergence_angle(double w0);

}  // namespace arraylight

#endif
