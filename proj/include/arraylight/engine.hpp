#ifndef ARRAYLIGHT_ENGINE_HPP
#define ARRAYLIGHT_ENGINE_HPP

#include <cstdint>
#include <vector>

#include "arraylight/generator.hpp"
#include "arraylight/rng.hpp"

namespace arraylight {

// 2^N amplitudes indexed by atomic bit pattern (bit n set <=> atom n excited).
struct StateVector {
    int N = 0;
    std::vector<Complex> amps;
    double norm2 = 0.0;

    static StateVector ground(int N) {
        StateVector s;
        s.N = N;
        s.amps.assign(std::size_t(1) << N, Complex(0));
        s.amps[0] = Complex(1.0);
        s.norm2 = 1.0;
        return s;
    }
    double recompute_norm2() const;
    double excited_sum() const;  // sum_n <sigma_n^dag sigma_n> (unnormalized)
};

struct PhotonRecord {
    double t = 0.0;  // internal units (1/Gamma)
    int q = -1;      // detector index; -1 for source-mode (non-directional) jumps
    int s = 0;
    double theta = 0.0, phi = 0.0;
};

struct TraceSample {
    double t = 0.0;
    double excited_sum = 0.0;  // normalized sum_n <sigma_n^dag sigma_n>
    double p_forward = 0.0;    // forward fraction of the instantaneous jump rate
    double ground_pop = 0.0;   // normalized all-atoms-ground population
};

struct TrajectoryResult {
    std::vector<PhotonRecord> records;
    std::vector<TraceSample> traces;
};

struct EngineConfig {
    double duration = 0.0;       // internal units
    double dt = 0.01;
    double sample_interval = 0.0;  // 0 = no traces
    double theta_cut = 0.0;        // forward-cone half-angle for the p_forward trace
    std::uint64_t seed = 0;
    int workers = 1;
};

// dpsi/dt = -i (sum_nm M_nm sigma_n^dag sigma_m + sum_n d_n sigma_n^dag) psi.
// The constant -(i/2)|alpha|^2 term is excluded here (folded analytically in
// rk4_step). out is accumulated into (caller zeroes it).
void apply_generator(const StateVector& psi, const Generator& gen,
                     std::vector<Complex>& out);

// One classical 4th-order step of size dt, then the exact scalar factor
// exp(-flux dt / 2); updates norm2.
void rk4_step(StateVector& psi, const Generator& gen, double dt);

// Bisection of the step [0, dt] from psi0 until |norm2 - threshold| <
// 1e-9 * threshold; returns the offset t* and leaves psi at t*.
double locate_jump(const StateVector& psi0, const Generator& gen, double dt,
                   double threshold, StateVector& psi_at_jump);

// p_qs = |L alpha|^2 norm2 + 2 Re[conj(L alpha) D sum_n phase_qn v_n]
//        + |D|^2 phase^dag G phase, via the Gram factorization
// (O(N^2 2^N + Q N^2)). Tiny negative values are clamped to zero.
std::vector<double> detector_probabilities(const StateVector& psi,
                                           const DetectorGrid& grid,
                                           const DriveField& drive);

// psi <- L_qs alpha psi + D_qs sum_n phase_qn sigma_n psi, renormalized.
void apply_jump(StateVector& psi, const DetectorGrid& grid, const DriveField& drive,
                int q, int s);

TrajectoryResult run_trajectory(const Generator& gen, const DetectorGrid& grid,
                                const DriveField& drive, const EngineConfig& cfg,
                                std::uint64_t trajectory_index);

std::vector<TrajectoryResult> run_ensemble(const Generator& gen,
                                           const DetectorGrid& grid,
                                           const DriveField& drive,
                                           const EngineConfig& cfg, int J);

}  // namespace arraylight

#endif
