#include "arraylight/generator.hpp"

#include <stdexcept>

namespace arraylight {

Eigen::VectorXcd reduced_drive(const DriveField& drive, const DetectorGrid& grid) {
    if (!grid.has_coefficients())
        throw std::runtime_error("reduced_drive: attach_jump_coefficients first");
    return Complex(0.0, -1.0) * drive.alpha * grid.cross.conjugate();
}

Generator build_generator(const Couplings& couplings, const DriveField& drive,
                          const AtomArray& array, const DetectorGrid& grid) {
    const int N = array.size();
    if (N > 0 && !grid.has_coefficients())
        throw std::runtime_error("build_generator: attach_jump_coefficients first");
    if (N > 0 && grid.n_atoms != N)
        throw std::runtime_error("build_generator: grid built for a different array");
    Generator gen;
    gen.N = N;
    gen.flux = drive.photon_flux();
    gen.M = Eigen::MatrixXcd::Zero(N, N);
    gen.d = Eigen::VectorXcd::Zero(N);
    gen.e = Eigen::VectorXcd::Zero(N);
    if (N == 0) return gen;
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            gen.M(n, m) = (n == m ? Complex(0.0) : couplings.Delta(n, m)) -
                          Complex(0.0, 0.5) * grid.decay_grid(n, m);
    gen.d = reduced_drive(drive, grid);
    return gen;
}

}  // namespace arraylight
