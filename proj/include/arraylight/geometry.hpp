#ifndef ARRAYLIGHT_GEOMETRY_HPP
#define ARRAYLIGHT_GEOMETRY_HPP

#include <array>
#include <string>
#include <vector>

#include "arraylight/units.hpp"

namespace arraylight {

using Vec2 = std::array<double, 2>;
using Vec3 = std::array<double, 3>;
using CVec3 = std::array<Complex, 3>;

enum class Layout { N1, N7, N13, N19, File };

// Two-dimensional atom array in the z = 0 plane. Positions are stored in
// units of lambda; u_hat is the (complex) dipole polarization unit vector.
struct AtomArray {
    std::vector<Vec2> positions;
    CVec3 u_hat = circular_polarization();
    double spacing = 0.0;  // nearest-neighbor distance

    int size() const { return static_cast<int>(positions.size()); }

    static CVec3 circular_polarization() {
        const double s = 1.0 / std::sqrt(2.0);
        return {Complex(s, 0.0), Complex(0.0, s), Complex(0.0, 0.0)};
    }

    // recomputes the minimum pairwise distance; throws on duplicates
    void finalize();
};

// Centered hexagonal clusters from the paper's Fig. 1: N7 = center + first
// ring, N13 = N7 + the six second-shell vertices at sqrt(3)*d, N19 = full
// centered hexagon (adds the six sites at 2d).
AtomArray build_hex_array(Layout layout, double d);

// Plain-text coordinates file: one "x y" pair per line in nm, '#' comments.
AtomArray load_array_file(const std::string& path, const PhysicalParams& params);

}  // namespace arraylight

#endif
