#ifndef ARRAYLIGHT_UNITS_HPP
#define ARRAYLIGHT_UNITS_HPP

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

namespace arraylight {

using Complex = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

// Everything inside the engine uses Gamma = 1 and lambda = 1 (k = 2*pi).
// PhysicalParams only matters at the I/O boundary: converting MHz / nm / ns
// inputs and outputs to and from internal units.
struct PhysicalParams {
    double lambda_nm = 780.0;            // transition wavelength
    double Gamma_rad_s = 2.0 * pi * 6.0e6;  // single-atom decay rate

    PhysicalParams() = default;
    PhysicalParams(double lambda_nm_, double Gamma_rad_s_)
        : lambda_nm(lambda_nm_), Gamma_rad_s(Gamma_rad_s_) {
        if (lambda_nm <= 0.0 || Gamma_rad_s <= 0.0)
            throw std::invalid_argument("PhysicalParams: lambda and Gamma must be positive");
    }

    // lengths
    double length_from_nm(double nm) const { return nm / lambda_nm; }
    double nm_from_length(double x) const { return x * lambda_nm; }

    // angular rates (an input of f MHz means 2*pi*f*1e6 rad/s)
    double rate_from_MHz(double f_MHz) const { return 2.0 * pi * f_MHz * 1.0e6 / Gamma_rad_s; }
    double MHz_from_rate(double r) const { return r * Gamma_rad_s / (2.0 * pi * 1.0e6); }

    // times
    double time_from_ns(double ns) const { return ns * 1.0e-9 * Gamma_rad_s; }
    double ns_from_time(double t) const { return t / Gamma_rad_s * 1.0e9; }
    double time_from_us(double us) const { return time_from_ns(us * 1.0e3); }

    // plain rates (events per second), |alpha|^2 and friends
    double per_s_from_rate(double r) const { return r * Gamma_rad_s; }
    double rate_from_per_s(double r) const { return r / Gamma_rad_s; }
};

}  // namespace arraylight

#endif
