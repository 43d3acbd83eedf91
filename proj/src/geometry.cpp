#include "arraylight/geometry.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace arraylight {

void AtomArray::finalize() {
    const int n = size();
    double dmin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            const double dx = positions[i][0] - positions[j][0];
            const double dy = positions[i][1] - positions[j][1];
            const double r = std::hypot(dx, dy);
            if (r < 1e-9)
                throw std::runtime_error("AtomArray: duplicate atom positions");
            dmin = std::min(dmin, r);
        }
    }
    spacing = (n > 1) ? dmin : 0.0;
}

AtomArray build_hex_array(Layout layout, double d) {
    if (d <= 0.0)
        throw std::invalid_argument("build_hex_array: spacing must be positive");
    if (layout == Layout::File)
        throw std::invalid_argument("build_hex_array: use load_array_file for file layouts");

    AtomArray a;
    a.positions.push_back({0.0, 0.0});
    if (layout != Layout::N1) {
        for (int k = 0; k < 6; ++k) {
            const double ang = k * pi / 3.0;
            a.positions.push_back({d * std::cos(ang), d * std::sin(ang)});
        }
    }
    if (layout == Layout::N13 || layout == Layout::N19) {
        // second-shell vertices, rotated 30 degrees, at sqrt(3)*d
        for (int k = 0; k < 6; ++k) {
            const double ang = pi / 6.0 + k * pi / 3.0;
            const double r = std::sqrt(3.0) * d;
            a.positions.push_back({r * std::cos(ang), r * std::sin(ang)});
        }
    }
    if (layout == Layout::N19) {
        for (int k = 0; k < 6; ++k) {
            const double ang = k * pi / 3.0;
            a.positions.push_back({2.0 * d * std::cos(ang), 2.0 * d * std::sin(ang)});
        }
    }
    a.finalize();
    return a;
}

AtomArray load_array_file(const std::string& path, const PhysicalParams& params) {
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("load_array_file: cannot open " + path);
    AtomArray a;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        double x_nm, y_nm;
        if (!(ss >> x_nm)) continue;  // blank line
        if (!(ss >> y_nm))
            throw std::runtime_error("load_array_file: " + path + ":" +
                                     std::to_string(lineno) + ": expected 'x y' pair");
        double extra;
        if (ss >> extra)
            throw std::runtime_error("load_array_file: " + path + ":" +
                                     std::to_string(lineno) + ": non-planar input (z given)");
        a.positions.push_back({params.length_from_nm(x_nm), params.length_from_nm(y_nm)});
    }
    if (a.positions.empty())
        throw std::runtime_error("load_array_file: " + path + ": no coordinates");
    a.finalize();
    return a;
}

}  // namespace arraylight
