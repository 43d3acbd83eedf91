#include "arraylight/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace arraylight {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

std::string num(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

}  // namespace

void write_records_csv(const std::string& path,
                       const std::vector<TrajectoryResult>& results,
                       const PhysicalParams& phys) {
    auto out = open_out(path);
    out << "trajectory,t_ns,q,s,theta_rad,phi_rad\n";
    for (std::size_t j = 0; j < results.size(); ++j)
        for (const auto& r : results[j].records)
            out << j << ',' << num(phys.ns_from_time(r.t)) << ',' << r.q << ','
                << r.s << ',' << num(r.theta) << ',' << num(r.phi) << '\n';
}

std::vector<TrajectoryResult> read_records_csv(const std::string& path,
                                               const PhysicalParams& phys) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string line;
    if (!std::getline(in, line) || line != "trajectory,t_ns,q,s,theta_rad,phi_rad")
        throw std::runtime_error(path + ": not a records CSV");
    std::vector<TrajectoryResult> results;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        PhotonRecord r;
        std::size_t traj;
        double t_ns;
        if (std::sscanf(line.c_str(), "%zu,%lf,%d,%d,%lf,%lf", &traj, &t_ns, &r.q,
                        &r.s, &r.theta, &r.phi) != 6)
            throw std::runtime_error(path + ":" + std::to_string(lineno) +
                                     ": malformed record");
        r.t = phys.time_from_ns(t_ns);
        if (traj >= results.size()) results.resize(traj + 1);
        results[traj].records.push_back(r);
    }
    return results;
}

void write_traces_csv(const std::string& path,
                      const std::vector<TrajectoryResult>& results,
                      const PhysicalParams& phys) {
    auto out = open_out(path);
    out << "trajectory,t_ns,excited_sum,p_f_normalized\n";
    for (std::size_t j = 0; j < results.size(); ++j)
        for (const auto& s : results[j].traces)
            out << j << ',' << num(phys.ns_from_time(s.t)) << ','
                << num(s.excited_sum) << ',' << num(s.p_forward) << '\n';
}

void write_histogram_csv(const std::string& path, const WaitingHistogram& h,
                         const std::vector<double>& poisson,
                         const PhysicalParams& phys) {
    auto out = open_out(path);
    const char* cls = h.cls == Direction::Forward    ? "forward"
                      : h.cls == Direction::Backward ? "backward"
                                                     : "side";
    out << "# bin_ns=" << num(phys.ns_from_time(h.bin)) << "\n";
    out << "# class=" << cls << "\n";
    out << "# events=" << h.events << " gaps=" << h.total_gaps
        << " overflow=" << h.overflow << "\n";
    out << "# rate_per_s=" << num(phys.per_s_from_rate(h.rate)) << "\n";
    out << "dt_ns,density_per_ns,poisson_per_ns,counts\n";
    for (std::size_t b = 0; b < h.density.size(); ++b) {
        const double mid = (b + 0.5) * phys.ns_from_time(h.bin);
        const double conv = phys.ns_from_time(1.0);  // per internal time -> per ns
        out << num(mid) << ',' << num(h.density[b] / conv) << ','
            << num(b < poisson.size() ? poisson[b] / conv : 0.0) << ','
            << h.counts[b] << '\n';
    }
}

void write_pattern_csv(const std::string& path, const RadiationPattern& p,
                       const PhysicalParams& phys) {
    (void)phys;
    auto out = open_out(path);
    out << "# intensity: events per (Gamma^-1 * sr), azimuthally integrated\n";
    out << "theta_rad,intensity,counts\n";
    for (std::size_t b = 0; b < p.intensity.size(); ++b)
        out << num(p.theta_centers[b]) << ',' << num(p.intensity[b]) << ','
            << p.counts[b] << '\n';
}

void write_pair_csv(const std::string& path, const PairFractionCurve& c,
                    double dt_cut_ns, const PhysicalParams& phys) {
    auto out = open_out(path);
    out << "# dt_cut_ns=" << num(dt_cut_ns) << "\n";
    out << "# final=" << num(c.final_value) << "\n";
    out << "t_ns,pair_fraction\n";
    for (std::size_t i = 0; i < c.t.size(); ++i)
        out << num(phys.ns_from_time(c.t[i])) << ',' << num(c.fraction[i]) << '\n';
}

void write_scan_csv(const std::string& path, const ScanResult& scan,
                    const PhysicalParams& phys) {
    auto out = open_out(path);
    out << "# best_d_nm=" << num(phys.nm_from_length(scan.best_d))
        << " best_w0_nm=" << num(phys.nm_from_length(scan.best_w0))
        << " best_R=" << num(scan.best_R) << "\n";
    out << "d_nm,w0_nm,R,T\n";
    for (std::size_t i = 0; i < scan.d_values.size(); ++i)
        for (std::size_t k = 0; k < scan.w0_values.size(); ++k)
            out << num(phys.nm_from_length(scan.d_values[i])) << ','
                << num(phys.nm_from_length(scan.w0_values[k])) << ','
                << num(scan.R[i][k]) << ',' << num(scan.T[i][k]) << '\n';
}

void write_summary_json(const std::string& path, const RunSummary& s,
                        const RunConfig& cfg) {
    nlohmann::json j;
    j["power"] = {{"R", s.budget.R},
                  {"T", s.budget.T},
                  {"S", s.budget.S},
                  {"n_forward", s.budget.n_forward},
                  {"n_backward", s.budget.n_backward},
                  {"n_side", s.budget.n_side}};
    j["pair_fraction_forward"] = s.pair_fraction_forward;
    j["poisson_pair_forward"] = s.poisson_pair_forward;
    j["events_total"] = s.events_total;
    j["flux_ratio"] = s.flux_ratio;
    j["grid_residuals"] = {{"res_F", s.res_F}, {"res_D", s.res_D}, {"res_LD", s.res_LD}};
    j["runtime_s"] = s.runtime_s;
    j["theta_cut_rad"] = s.theta_cut;
    j["Q"] = s.Q;
    j["J"] = s.J;
    j["seed"] = cfg.seed;
    j["units"] = {{"lambda_nm", cfg.phys.lambda_nm},
                  {"Gamma_rad_s", cfg.phys.Gamma_rad_s}};
    auto out = open_out(path);
    out << j.dump(2) << "\n";
}

void write_manifest(const std::string& path, const RunConfig& cfg) {
    auto out = open_out(path);
    out << "# arraylight manifest v1 (re-run: arraylight simulate -c <this file>)\n";
    out << config_echo(cfg);
}

}  // namespace arraylight
