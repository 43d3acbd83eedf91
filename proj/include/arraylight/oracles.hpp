#ifndef ARRAYLIGHT_ORACLES_HPP
#define ARRAYLIGHT_ORACLES_HPP

#include <vector>

#include "arraylight/engine.hpp"

namespace arraylight {

// Dense master-equation integration (Eq. of collective spontaneous emission)
// with the same reduced Hermitian drive d_n sigma^dag + h.c. as the engine's
// ensemble average. Closed-form Delta/Gamma couplings; N <= 6.
struct MESolution {
    std::vector<double> times;
    std::vector<double> all_ground;            // <0|rho|0>
    std::vector<double> excited_total;         // sum_n <sigma_n^dag sigma_n>
    std::vector<std::vector<double>> excited;  // per atom
    std::vector<std::vector<Complex>> sigma;   // per atom <sigma_n>
    double max_trace_err = 0.0;
};

MESolution master_equation_evolve(const AtomArray& array,
                                  const Eigen::VectorXcd& drive_d,
                                  const Couplings& couplings,
                                  const std::vector<double>& t_grid, double dt,
                                  bool start_excited = false);

// MCWF unraveling with collective source-mode jump operators
// sqrt(rate_k) sum_n V_nk sigma_n; atomic dynamics only (no detectors).
TrajectoryResult source_mode_trajectory(const AtomArray& array,
                                        const Eigen::VectorXcd& drive_d,
                                        const Couplings& couplings,
                                        const EngineConfig& cfg,
                                        std::uint64_t trajectory_index);

// Linear coupled-dipole steady state: sum_m (i Delta_nm + Gamma_nm/2) beta_m
// = -i d_n. Exact for the linear model; physical in the low-intensity limit.
struct ClassicalDipoles {
    Eigen::VectorXcd beta;
    double residual = 0.0;
};

ClassicalDipoles classical_steady_state(const AtomArray& array,
                                        const Eigen::VectorXcd& drive_d,
                                        const Couplings& couplings);

// Low-intensity reflectivity/transmissivity map over (d, w0) from the
// classical dipoles interfering with the laser mode on the detector grid.
struct ScanResult {
    std::vector<double> d_values, w0_values;
    std::vector<std::vector<double>> R, T;  // [i_d][i_w0]
    double best_d = 0.0, best_w0 = 0.0, best_R = 0.0;
};

ScanResult low_intensity_scan(Layout layout, const std::vector<double>& d_values,
                              const std::vector<double>& w0_values, int Q_target,
                              Obliquity obliquity = Obliquity::Cos);

// R/T/S of one classical solution on one grid (used by the scan and tests).
struct ClassicalPower {
    double R = 0.0, T = 0.0, S = 0.0;
};

ClassicalPower classical_power(const AtomArray& array, const DriveField& drive,
                               const DetectorGrid& grid,
                               const ClassicalDipoles& dip, double theta_cut);

}  // namespace arraylight

#endif
