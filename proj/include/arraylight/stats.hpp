#ifndef ARRAYLIGHT_STATS_HPP
#define ARRAYLIGHT_STATS_HPP

#include <vector>

#include "arraylight/engine.hpp"

namespace arraylight {

enum class Direction { Forward, Backward, Side };

// Forward: theta < theta_cut; backward: theta > pi - theta_cut; side otherwise.
// Default theta_cut = 2 * divergence_angle(w0).
struct DirectionClass {
    double theta_cut = 0.0;
    Direction classify(double theta) const;
};

struct WaitingHistogram {
    double bin = 0.0;                 // internal units
    Direction cls = Direction::Forward;
    std::vector<long> counts;
    std::vector<double> density;      // normalized to unit area incl. overflow
    long total_gaps = 0;
    long overflow = 0;
    long events = 0;
    double rate = 0.0;                // events per unit time (internal units)
};

// Consecutive-event gaps within one class, per trajectory (never across
// trajectory boundaries), pooled.
WaitingHistogram waiting_times(const std::vector<TrajectoryResult>& results,
                               const DirectionClass& dc, Direction cls, double bin,
                               int n_bins, double burn_in, double duration);

// Bin-averaged exponential waiting-time density rate * exp(-rate * dt).
std::vector<double> poisson_reference(double rate, double bin, int n_bins);

// P(gap < dt_cut) for the exponential reference.
double poisson_pair_fraction(double rate, double dt_cut);

// Fraction of photons with a same-class neighbor closer than dt_cut
// ("photons grouped in pairs"). Poisson reference: 1 - (1-p)^2 with
// p = poisson_pair_fraction.
double poisson_paired_photons(double rate, double dt_cut);

// Running (#photons with a neighbor gap < dt_cut) / (#events) vs observation
// time, pooled over trajectories, evaluated at the given sampling times.
struct PairFractionCurve {
    std::vector<double> t;
    std::vector<double> fraction;
    double final_value = 0.0;
};

PairFractionCurve pair_fraction_cdf(const std::vector<TrajectoryResult>& results,
                                    const DirectionClass& dc, Direction cls,
                                    double dt_cut, double burn_in, double duration,
                                    int n_points = 200);

// Azimuthally integrated detected flux per unit solid angle, binned in theta.
struct RadiationPattern {
    std::vector<double> theta_centers;
    std::vector<double> intensity;  // events / (total time * solid angle of bin)
    std::vector<long> counts;
};

RadiationPattern radiation_pattern(const std::vector<TrajectoryResult>& results,
                                   int n_theta_bins, double burn_in, double duration);

struct PowerBudget {
    double R = 0.0, T = 0.0, S = 0.0;  // fractions of |alpha|^2
    long n_forward = 0, n_backward = 0, n_side = 0;
    double observed_time = 0.0;        // per-trajectory time * n_trajectories
};

PowerBudget power_budget(const std::vector<TrajectoryResult>& results,
                         const DirectionClass& dc, const DriveField& drive,
                         double burn_in, double duration);

}  // namespace arraylight

#endif
