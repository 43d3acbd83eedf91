#include "arraylight/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace arraylight {

Direction DirectionClass::classify(double theta) const {
    if (theta_cut <= 0.0 || theta_cut >= pi / 2.0)
        throw std::invalid_argument("DirectionClass: theta_cut must be in (0, pi/2)");
    if (theta < theta_cut) return Direction::Forward;
    if (theta > pi - theta_cut) return Direction::Backward;
    return Direction::Side;
}

namespace {

// class-filtered, burn-in-trimmed event times of one trajectory
std::vector<double> class_times(const TrajectoryResult& tr, const DirectionClass& dc,
                                Direction cls, double burn_in, double duration) {
    std::vector<double> t;
    for (const auto& r : tr.records) {
        if (r.t < burn_in || r.t > duration) continue;
        if (dc.classify(r.theta) == cls) t.push_back(r.t);
    }
    return t;
}

}  // namespace

WaitingHistogram waiting_times(const std::vector<TrajectoryResult>& results,
                               const DirectionClass& dc, Direction cls, double bin,
                               int n_bins, double burn_in, double duration) {
    if (bin <= 0.0 || n_bins < 1)
        throw std::invalid_argument("waiting_times: bad binning");
    WaitingHistogram h;
    h.bin = bin;
    h.cls = cls;
    h.counts.assign(n_bins, 0);
    double observed = 0.0;
    for (const auto& tr : results) {
        const auto t = class_times(tr, dc, cls, burn_in, duration);
        h.events += (long)t.size();
        observed += duration - burn_in;
        for (std::size_t i = 1; i < t.size(); ++i) {
            const double gap = t[i] - t[i - 1];
            const int b = (int)(gap / bin);
            if (b < n_bins)
                ++h.counts[b];
            else
                ++h.overflow;
            ++h.total_gaps;
        }
    }
    if (h.total_gaps < 1)
        throw std::runtime_error("waiting_times: empty class");
    h.density.assign(n_bins, 0.0);
    for (int b = 0; b < n_bins; ++b)
        h.density[b] = (double)h.counts[b] / ((double)h.total_gaps * bin);
    h.rate = (observed > 0.0) ? h.events / observed : 0.0;
    return h;
}

std::vector<double> poisson_reference(double rate, double bin, int n_bins) {
    if (rate <= 0.0) throw std::invalid_argument("poisson_reference: rate must be > 0");
    std::vector<double> d(n_bins);
    for (int b = 0; b < n_bins; ++b) {
        const double a = b * bin, z = (b + 1) * bin;
        d[b] = (std::exp(-rate * a) - std::exp(-rate * z)) / bin;
    }
    return d;
}

double poisson_pair_fraction(double rate, double dt_cut) {
    return 1.0 - std::exp(-rate * dt_cut);
}

double poisson_paired_photons(double rate, double dt_cut) {
    const double p = poisson_pair_fraction(rate, dt_cut);
    return 1.0 - (1.0 - p) * (1.0 - p);
}

PairFractionCurve pair_fraction_cdf(const std::vector<TrajectoryResult>& results,
                                    const DirectionClass& dc, Direction cls,
                                    double dt_cut, double burn_in, double duration,
                                    int n_points) {
    if (dt_cut <= 0.0) throw std::invalid_argument("pair_fraction_cdf: dt_cut must be > 0");
    PairFractionCurve c;
    c.t.resize(n_points);
    c.fraction.assign(n_points, 0.0);
    const double span = duration - burn_in;
    for (int i = 0; i < n_points; ++i) c.t[i] = burn_in + span * (i + 1) / n_points;
    long events_total = 0, paired_total = 0;
    std::vector<long> ev(n_points, 0), pr(n_points, 0);
    for (const auto& tr : results) {
        const auto t = class_times(tr, dc, cls, burn_in, duration);
        for (std::size_t i = 0; i < t.size(); ++i) {
            const bool paired = (i > 0 && t[i] - t[i - 1] < dt_cut) ||
                                (i + 1 < t.size() && t[i + 1] - t[i] < dt_cut);
            const int from = std::min(
                n_points - 1, std::max(0, (int)std::ceil((t[i] - burn_in) / span * n_points) - 1));
            for (int k = from; k < n_points; ++k) ++ev[k];
            if (paired)
                for (int k = from; k < n_points; ++k) ++pr[k];
            if (paired) ++paired_total;
        }
        events_total += (long)t.size();
    }
    if (events_total < 1)
        throw std::runtime_error("pair_fraction_cdf: empty class");
    for (int i = 0; i < n_points; ++i)
        c.fraction[i] = (ev[i] > 0) ? (double)pr[i] / ev[i] : 0.0;
    c.final_value = (double)paired_total / events_total;
    return c;
}

RadiationPattern radiation_pattern(const std::vector<TrajectoryResult>& results,
                                   int n_theta_bins, double burn_in, double duration) {
    RadiationPattern p;
    p.theta_centers.resize(n_theta_bins);
    p.counts.assign(n_theta_bins, 0);
    p.intensity.assign(n_theta_bins, 0.0);
    const double db = pi / n_theta_bins;
    for (int b = 0; b < n_theta_bins; ++b) p.theta_centers[b] = (b + 0.5) * db;
    double observed = 0.0;
    for (const auto& tr : results) {
        observed += duration - burn_in;
        for (const auto& r : tr.records) {
            if (r.t < burn_in || r.t > duration) continue;
            const int b = std::min(n_theta_bins - 1, (int)(r.theta / db));
            ++p.counts[b];
        }
    }
    for (int b = 0; b < n_theta_bins; ++b) {
        const double omega =
            2.0 * pi * (std::cos(b * db) - std::cos((b + 1) * db));
        p.intensity[b] = (observed > 0.0) ? p.counts[b] / (observed * omega) : 0.0;
    }
    return p;
}

PowerBudget power_budget(const std::vector<TrajectoryResult>& results,
                         const DirectionClass& dc, const DriveField& drive,
                         double burn_in, double duration) {
    PowerBudget b;
    for (const auto& tr : results) {
        b.observed_time += duration - burn_in;
        for (const auto& r : tr.records) {
            if (r.t < burn_in || r.t > duration) continue;
            switch (dc.classify(r.theta)) {
                case Direction::Forward: ++b.n_forward; break;
                case Direction::Backward: ++b.n_backward; break;
                case Direction::Side: ++b.n_side; break;
            }
        }
    }
    const double denom = drive.photon_flux() * b.observed_time;
    if (denom > 0.0) {
        b.T = b.n_forward / denom;
        b.R = b.n_backward / denom;
        b.S = b.n_side / denom;
    }
    return b;
}

}  // namespace arraylight
