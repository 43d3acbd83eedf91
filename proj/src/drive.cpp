#include "arraylight/drive.hpp"

#include <cmath>
#include <stdexcept>

namespace arraylight {

double gaussian_weight(const Vec2& p, double w0) {
    if (w0 <= 0.0)
        throw std::invalid_argument("gaussian_weight: w0 must be positive");
    return std::exp(-(p[0] * p[0] + p[1] * p[1]) / (w0 * w0));
}

DriveField derive_drive(Complex Omega, double w0, const AtomArray& array) {
    if (w0 <= 0.0)
        throw std::invalid_argument("derive_drive: w0 must be positive");
    DriveField d;
    d.Omega = Omega;
    d.w0 = w0;
    d.A_beam = pi * w0 * w0 / 2.0;
    d.A_atom = 3.0 / (2.0 * pi);
    d.vartheta = d.A_atom / (4.0 * d.A_beam);
    d.g = std::sqrt(d.vartheta);
    d.alpha = Omega / (2.0 * d.g);
    d.f.reserve(array.positions.size());
    for (const auto& p : array.positions) d.f.push_back(gaussian_weight(p, w0));
    return d;
}

double divergence_angle(double w0) {
    if (w0 <= 0.0)
        throw std::invalid_argument("divergence_angle: w0 must be positive");
    return 1.0 / (pi * w0);
}

}  // namespace arraylight
