#ifndef ARRAYLIGHT_IO_HPP
#define ARRAYLIGHT_IO_HPP

#include <string>
#include <vector>

#include "arraylight/config.hpp"
#include "arraylight/oracles.hpp"

namespace arraylight {

// Columns: trajectory,t_ns,q,s,theta_rad,phi_rad
void write_records_csv(const std::string& path,
                       const std::vector<TrajectoryResult>& results,
                       const PhysicalParams& phys);

// Inverse of write_records_csv (used by the stats subcommand).
std::vector<TrajectoryResult> read_records_csv(const std::string& path,
                                               const PhysicalParams& phys);

// Columns: trajectory,t_ns,excited_sum,p_f_normalized
void write_traces_csv(const std::string& path,
                      const std::vector<TrajectoryResult>& results,
                      const PhysicalParams& phys);

void write_histogram_csv(const std::string& path, const WaitingHistogram& h,
                         const std::vector<double>& poisson,
                         const PhysicalParams& phys);

void write_pattern_csv(const std::string& path, const RadiationPattern& p,
                       const PhysicalParams& phys);

void write_pair_csv(const std::string& path, const PairFractionCurve& c,
                    double dt_cut_ns, const PhysicalParams& phys);

void write_scan_csv(const std::string& path, const ScanResult& scan,
                    const PhysicalParams& phys);

// Summary of one simulate run (JSON): power budget, pair fractions, event
// counts, grid residual diagnostics, runtime.
struct RunSummary {
    PowerBudget budget;
    double pair_fraction_forward = 0.0;
    double poisson_pair_forward = 0.0;
    long events_total = 0;
    double flux_ratio = 0.0;  // detected rate / |alpha|^2
    double res_F = 0.0, res_D = 0.0, res_LD = 0.0;
    double runtime_s = 0.0;
    double theta_cut = 0.0;
    int Q = 0;
    int J = 0;
};

void write_summary_json(const std::string& path, const RunSummary& s,
                        const RunConfig& cfg);

void write_manifest(const std::string& path, const RunConfig& cfg);

}  // namespace arraylight

#endif
