#ifndef ARRAYLIGHT_GENERATOR_HPP
#define ARRAYLIGHT_GENERATOR_HPP

#include <Eigen/Dense>

#include "arraylight/couplings.hpp"
#include "arraylight/drive.hpp"
#include "arraylight/farfield.hpp"

namespace arraylight {

// Reduced non-Hermitian generator after coherent-field elimination.
// H_eff = sum_nm M_nm sigma_n^dag sigma_m + sum_n d_n sigma_n^dag - (i/2) flux,
// with M = Delta (off-diagonal) - (i/2) K_grid and d_n = -i alpha conj(c_n).
// The drive and decay matrices both come from the grid sums so that the
// deterministic evolution and the jump operators are consistent to machine
// precision (norm bookkeeping: -d norm2/dt == sum of jump probabilities).
// The constant flux = |alpha|^2 term is folded analytically in the stepper.
//
// The sigma coefficient is exactly zero: the Hermitian drive (d_n/2) sigma^dag
// + h.c. and the -(i/2) sum P^dag P cross terms combine to d_n on sigma^dag
// alone. The ensemble-averaged master equation nevertheless carries the full
// Hermitian drive d_n sigma^dag + conj(d_n) sigma, because displacing a jump
// operator C -> C + beta adds -(i/2)(beta C^dag - conj(beta) C) to the
// effective Hamiltonian; the oracles use that reduced drive.
struct Generator {
    int N = 0;
    Eigen::MatrixXcd M;  // N x N, coefficient of sigma_n^dag sigma_m
    Eigen::VectorXcd d;  // N, coefficient of sigma_n^dag
    Eigen::VectorXcd e;  // N, coefficient of sigma_n (zero for the engine's
                         // reduced generator; used by the source-mode oracle)
    double flux = 0.0;   // |alpha|^2
};

Generator build_generator(const Couplings& couplings, const DriveField& drive,
                          const AtomArray& array, const DetectorGrid& grid);

// Reduced Hermitian drive coefficients for the oracles (full d_n).
Eigen::VectorXcd reduced_drive(const DriveField& drive, const DetectorGrid& grid);

}  // namespace arraylight

#endif
