#include "arraylight/engine.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <stdexcept>
#include <thread>

namespace arraylight {

double StateVector::recompute_norm2() const {
    double s = 0.0;
    for (const auto& a : amps) s += std::norm(a);
    return s;
}

double StateVector::excited_sum() const {
    double s = 0.0;
    for (std::size_t j = 0; j < amps.size(); ++j)
        s += std::popcount(j) * std::norm(amps[j]);
    return s;
}

namespace {

// dpsi/dt without the constant flux term, accumulated into out (pre-zeroed).
// Bit-enumerated: per basis state only the nonzero matrix elements are touched
// (k(N-k) coupling updates instead of an N^2 scan), which dominates the cost
// of the 2^13-dimensional runs.
void rhs(const std::vector<Complex>& psi, const Generator& gen,
         std::vector<Complex>& out) {
    const std::size_t dim = psi.size();
    const int N = gen.N;
    if (N == 0) return;
    const Complex mi(0.0, -1.0);

    static thread_local std::vector<Complex> diag, cd, ce, cM;
    cd.resize(N);
    ce.resize(N);
    cM.assign(std::size_t(N) * N, Complex(0));
    bool has_e = false;
    for (int n = 0; n < N; ++n) {
        cd[n] = mi * gen.d[n];
        ce[n] = mi * gen.e[n];
        if (gen.e[n] != Complex(0.0)) has_e = true;
        for (int m = 0; m < N; ++m)
            if (m != n) cM[std::size_t(m) * N + n] = mi * gen.M(n, m);
    }
    diag.assign(dim, Complex(0));
    for (std::size_t j = 1; j < dim; ++j)
        diag[j] = diag[j & (j - 1)] + mi * gen.M(std::countr_zero(j), std::countr_zero(j));

    const std::size_t mask = dim - 1;
    for (std::size_t j = 0; j < dim; ++j) {
        const Complex v = psi[j];
        if (v == Complex(0.0)) continue;
        out[j] += diag[j] * v;
        const std::size_t rem = ~j & mask;
        for (std::size_t nb = rem; nb; nb &= nb - 1)
            out[j | (nb & -nb)] += cd[std::countr_zero(nb)] * v;
        if (has_e)
            for (std::size_t eb = j; eb; eb &= eb - 1)
                out[j & ~(eb & -eb)] += ce[std::countr_zero(eb)] * v;
        for (std::size_t mb = j; mb; mb &= mb - 1) {
            const int m = std::countr_zero(mb);
            const std::size_t base = j & ~(std::size_t(1) << m);
            const Complex* row = &cM[std::size_t(m) * N];
            for (std::size_t nb = rem; nb; nb &= nb - 1)
                out[base | (nb & -nb)] += row[std::countr_zero(nb)] * v;
        }
    }
}

struct Scratch {
    std::vector<Complex> k1, k2, k3, k4, tmp;
    void resize(std::size_t dim) {
        k1.assign(dim, Complex(0));
        k2.assign(dim, Complex(0));
        k3.assign(dim, Complex(0));
        k4.assign(dim, Complex(0));
        tmp.resize(dim);
    }
};

thread_local Scratch scratch;

}  // namespace

void apply_generator(const StateVector& psi, const Generator& gen,
                     std::vector<Complex>& out) {
    rhs(psi.amps, gen, out);
}

void rk4_step(StateVector& psi, const Generator& gen, double dt) {
    const std::size_t dim = psi.amps.size();
    auto& w = scratch;
    w.resize(dim);
    rhs(psi.amps, gen, w.k1);
    for (std::size_t j = 0; j < dim; ++j) w.tmp[j] = psi.amps[j] + 0.5 * dt * w.k1[j];
    rhs(w.tmp, gen, w.k2);
    for (std::size_t j = 0; j < dim; ++j) w.tmp[j] = psi.amps[j] + 0.5 * dt * w.k2[j];
    rhs(w.tmp, gen, w.k3);
    for (std::size_t j = 0; j < dim; ++j) w.tmp[j] = psi.amps[j] + dt * w.k3[j];
    rhs(w.tmp, gen, w.k4);
    const double damp = std::exp(-0.5 * gen.flux * dt);
    const double prev = psi.norm2;
    for (std::size_t j = 0; j < dim; ++j)
        psi.amps[j] = damp * (psi.amps[j] +
                              dt / 6.0 * (w.k1[j] + 2.0 * w.k2[j] + 2.0 * w.k3[j] + w.k4[j]));
    psi.norm2 = psi.recompute_norm2();
    if (psi.norm2 > prev * (1.0 + 1e-12))
        throw std::runtime_error("rk4_step: norm increased (integrator instability)");
}

double locate_jump(const StateVector& psi0, const Generator& gen, double dt,
                   double threshold, StateVector& psi_at_jump) {
    if (psi0.norm2 < threshold)
        throw std::logic_error("locate_jump: threshold already crossed at step start");
    double lo = 0.0, hi = dt;
    double tau = dt;
    for (int it = 0; it < 200; ++it) {
        tau = 0.5 * (lo + hi);
        psi_at_jump = psi0;
        rk4_step(psi_at_jump, gen, tau);
        const double n2 = psi_at_jump.norm2;
        if (std::abs(n2 - threshold) < 1e-9 * threshold) return tau;
        (n2 > threshold ? lo : hi) = tau;
        if (hi - lo < 1e-15 * dt) break;
    }
    return tau;
}

std::vector<double> detector_probabilities(const StateVector& psi,
                                           const DetectorGrid& grid,
                                           const DriveField& drive) {
    if (!grid.has_coefficients())
        throw std::runtime_error("detector_probabilities: attach_jump_coefficients first");
    const int N = psi.N;
    const std::size_t dim = psi.amps.size();
    // v_n = <psi|sigma_n|psi>, G_nm = <sigma_n psi|sigma_m psi>
    Eigen::VectorXcd v = Eigen::VectorXcd::Zero(N);
    Eigen::MatrixXcd G = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n) {
        const std::size_t bn = std::size_t(1) << n;
        for (std::size_t j = 0; j < dim; ++j)
            if (j & bn) v[n] += std::conj(psi.amps[j & ~bn]) * psi.amps[j];
        for (int m = 0; m < N; ++m) {
            const std::size_t bm = std::size_t(1) << m;
            Complex acc(0.0);
            for (std::size_t l = 0; l < dim; ++l)
                if (!(l & bn) && !(l & bm)) acc += std::conj(psi.amps[l | bn]) * psi.amps[l | bm];
            G(n, m) = acc;
        }
    }
    const Complex alpha = drive.alpha;
    std::vector<double> p(2 * (std::size_t)grid.Q, 0.0);
    double total = 0.0;
    Eigen::VectorXcd ph(N);
    for (int q = 0; q < grid.Q; ++q) {
        for (int n = 0; n < N; ++n) ph[n] = grid.phase[(std::size_t)q * N + n];
        const Complex w = (N > 0) ? Complex(ph.transpose() * v) : Complex(0.0);
        const double t_q = (N > 0) ? std::real(Complex(ph.adjoint() * (G * ph))) : 0.0;
        for (int s = 0; s < 2; ++s) {
            const Complex La = grid.L[2 * (std::size_t)q + s] * alpha;
            const Complex D = grid.D[2 * (std::size_t)q + s];
            double pq = std::norm(La) * psi.norm2 +
                        2.0 * std::real(std::conj(La) * D * w) + std::norm(D) * t_q;
            if (pq < 0.0) pq = 0.0;
            p[2 * (std::size_t)q + s] = pq;
            total += pq;
        }
    }
    if (total <= 0.0)
        throw std::runtime_error("detector_probabilities: vanishing total jump rate");
    return p;
}

void apply_jump(StateVector& psi, const DetectorGrid& grid, const DriveField& drive,
                int q, int s) {
    const int N = psi.N;
    const std::size_t dim = psi.amps.size();
    const Complex La = grid.L[2 * (std::size_t)q + s] * drive.alpha;
    const Complex D = grid.D[2 * (std::size_t)q + s];
    std::vector<Complex> next(dim);
    for (std::size_t l = 0; l < dim; ++l) {
        Complex acc = La * psi.amps[l];
        for (int n = 0; n < N; ++n) {
            const std::size_t bn = std::size_t(1) << n;
            if (!(l & bn))
                acc += D * grid.phase[(std::size_t)q * N + n] * psi.amps[l | bn];
        }
        next[l] = acc;
    }
    psi.amps = std::move(next);
    const double n2 = psi.recompute_norm2();
    if (n2 <= 0.0)
        throw std::runtime_error("apply_jump: zero-norm projection");
    const double inv = 1.0 / std::sqrt(n2);
    for (auto& a : psi.amps) a *= inv;
    psi.norm2 = 1.0;
}

TrajectoryResult run_trajectory(const Generator& gen, const DetectorGrid& grid,
                                const DriveField& drive, const EngineConfig& cfg,
                                std::uint64_t trajectory_index) {
    TrajectoryResult result;
    Rng rng(cfg.seed, trajectory_index);
    StateVector psi = StateVector::ground(gen.N);
    StateVector psi0 = psi, psi_jump = psi;
    double t = 0.0;
    double threshold = rng.uniform();
    double next_sample = (cfg.sample_interval > 0.0) ? 0.0 : cfg.duration + 1.0;
    const double eps = 1e-12 * cfg.duration;

    auto sample_traces = [&]() {
        while (t >= next_sample - eps && next_sample <= cfg.duration) {
            TraceSample ts;
            ts.t = t;
            ts.excited_sum = psi.excited_sum() / psi.norm2;
            ts.ground_pop = std::norm(psi.amps[0]) / psi.norm2;
            const auto p = detector_probabilities(psi, grid, drive);
            double fwd = 0.0, tot = 0.0;
            for (int q = 0; q < grid.Q; ++q) {
                const double pq = p[2 * (std::size_t)q] + p[2 * (std::size_t)q + 1];
                tot += pq;
                if (grid.theta[q] < cfg.theta_cut) fwd += pq;
            }
            ts.p_forward = (tot > 0.0) ? fwd / tot : 0.0;
            result.traces.push_back(ts);
            next_sample += cfg.sample_interval;
        }
    };

    sample_traces();
    while (t < cfg.duration - eps) {
        const double dt = std::min(cfg.dt, cfg.duration - t);
        psi0 = psi;
        rk4_step(psi, gen, dt);
        if (psi.norm2 < threshold) {
            const double tau = locate_jump(psi0, gen, dt, threshold, psi_jump);
            psi = psi_jump;
            t += tau;
            const auto p = detector_probabilities(psi, grid, drive);
            double total = 0.0;
            for (const double pq : p) total += pq;
            const double target = rng.uniform() * total;
            double acc = 0.0;
            std::size_t pick = p.size() - 1;
            for (std::size_t i = 0; i < p.size(); ++i) {
                acc += p[i];
                if (acc >= target) {
                    pick = i;
                    break;
                }
            }
            const int q = static_cast<int>(pick / 2), s = static_cast<int>(pick % 2);
            apply_jump(psi, grid, drive, q, s);
            PhotonRecord rec;
            rec.t = t;
            rec.q = q;
            rec.s = s;
            rec.theta = grid.theta[q];
            rec.phi = grid.phi[q];
            result.records.push_back(rec);
            threshold = rng.uniform();
        } else {
            t += dt;
        }
        sample_traces();
    }
    return result;
}

std::vector<TrajectoryResult> run_ensemble(const Generator& gen,
                                           const DetectorGrid& grid,
                                           const DriveField& drive,
                                           const EngineConfig& cfg, int J) {
    if (J < 1) throw std::invalid_argument("run_ensemble: J must be >= 1");
    std::vector<TrajectoryResult> results(J);
    const int workers = std::max(1, cfg.workers);
    if (workers == 1) {
        for (int j = 0; j < J; ++j)
            results[j] = run_trajectory(gen, grid, drive, cfg, (std::uint64_t)j);
        return results;
    }
    std::atomic<int> next{0};
    auto work = [&]() {
        for (;;) {
            const int j = next.fetch_add(1);
            if (j >= J) return;
            results[j] = run_trajectory(gen, grid, drive, cfg, (std::uint64_t)j);
        }
    };
    std::vector<std::thread> pool;
    for (int wkr = 0; wkr < workers; ++wkr) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return results;
}

}  // namespace arraylight
