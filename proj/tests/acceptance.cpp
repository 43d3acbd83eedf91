// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// gating failure. Long criteria (6-8) dominate the runtime; --quick skips
// everything slower than a minute for development runs.
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "arraylight/io.hpp"

using namespace arraylight;

namespace {

int g_failures = 0;

double now_s() {
    using clk = std::chrono::steady_clock;
    static const clk::time_point t0 = clk::now();
    return std::chrono::duration<double>(clk::now() - t0).count();
}

void report(int idx, bool pass, const std::string& detail, bool gating = true) {
    if (!pass && gating) ++g_failures;
    std::printf("criterion %2d: %s — %s\n", idx,
                pass ? "PASS" : (gating ? "FAIL" : "FAIL (non-gating)"),
                detail.c_str());
    std::fflush(stdout);
}

std::string fmt(const char* f, ...) {
    char buf[512];
    va_list ap;
    va_start(ap, f);
    std::vsnprintf(buf, sizeof buf, f, ap);
    va_end(ap);
    return buf;
}

Eigen::MatrixXcd sigma_dense(int N, int n) {
    const std::size_t dim = std::size_t(1) << N;
    const std::size_t bn = std::size_t(1) << n;
    Eigen::MatrixXcd s = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        if (j & bn) s(j & ~bn, j) = 1.0;
    return s;
}

// linear interpolation on a uniform time grid
double lerp(const std::vector<double>& t, const std::vector<double>& y, double x) {
    if (x <= t.front()) return y.front();
    if (x >= t.back()) return y.back();
    const double h = t[1] - t[0];
    const std::size_t i = std::min(t.size() - 2, (std::size_t)((x - t.front()) / h));
    const double w = (x - t[i]) / (t[i + 1] - t[i]);
    return (1.0 - w) * y[i] + w * y[i + 1];
}

struct MeanTrace {
    std::vector<double> t, value;  // per sample index, averaged over trajectories
};

MeanTrace mean_ground(const std::vector<TrajectoryResult>& results) {
    MeanTrace m;
    const std::size_t n = results.front().traces.size();
    m.t.assign(n, 0.0);
    m.value.assign(n, 0.0);
    for (const auto& tr : results) {
        for (std::size_t i = 0; i < n; ++i) {
            m.t[i] += tr.traces[i].t / results.size();
            m.value[i] += tr.traces[i].ground_pop / results.size();
        }
    }
    return m;
}

Scene scene_for(const std::string& preset, int Q, double duration, double dt,
                double sample_interval, std::uint64_t seed, int J_unused = 0) {
    (void)J_unused;
    RunConfig cfg;
    apply_preset(cfg, preset);
    cfg.Q = Q;
    cfg.seed = seed;
    cfg.seed_set = true;
    Scene sc = build_scene(cfg);
    sc.engine.duration = duration;
    sc.engine.dt = dt;
    sc.engine.sample_interval = sample_interval;
    sc.engine.workers = 1;
    return sc;
}

// ---------------------------------------------------------------- criterion 1
void criterion_1() {
    AtomArray one;
    one.positions.push_back({0.0, 0.0});
    one.finalize();
    const PhysicalParams phys;
    const auto drive = derive_drive(Complex(-0.5, 0.0), phys.length_from_nm(900.0), one);

    bool mono = true;
    double res_F = 1e9;
    for (const int Q : {11200, 44800, 179200}) {
        auto g = build_grid(Q);
        attach_jump_coefficients(g, drive, one);
        const double r = check_sum_F(g, drive);
        if (r >= res_F) mono = false;
        res_F = r;
    }

    const auto n7 = build_hex_array(Layout::N7, phys.length_from_nm(660.0));
    double res_D = 1e9;
    for (const int Q : {1400, 2800, 5600}) {
        auto g = build_grid(Q);
        attach_jump_coefficients(g, derive_drive(Complex(-0.5, 0.0), 900.0 / 780.0, n7), n7);
        const double r = check_sum_D(g, n7);
        if (r >= res_D) mono = false;
        res_D = r;
    }

    AtomArray two;
    two.positions = {{0.0, 0.0}, {900.0 / 780.0, 0.0}};
    two.finalize();
    const auto dr2 = derive_drive(Complex(-0.5, 0.0), 900.0 / 780.0, two);
    double res_LD = 1e9;
    for (const int Q : {1400, 2800, 5600}) {
        auto g = build_grid(Q);
        attach_jump_coefficients(g, dr2, two);
        double r = 0.0;
        for (const double x : check_sum_LD(g, dr2, two)) r = std::max(r, x);
        if (r >= res_LD) mono = false;
        res_LD = r;
    }

    const bool pass = mono && res_F < 1e-3 && res_D < 1e-3 && res_LD < 1e-3;
    report(1, pass,
           fmt("grid identities: res_F %.2e (Q=179200), res_D %.2e, res_LD %.2e "
               "(Q=5600), monotone refinement %s [%.0fs]",
               res_F, res_D, res_LD, mono ? "yes" : "NO", now_s()));
}

// ---------------------------------------------------------------- criterion 2
void criterion_2() {
    AtomArray arr;
    arr.positions = {{0.0, 0.0}, {0.7, 0.2}, {-0.4, 0.55}, {0.3, -0.6}};
    arr.finalize();
    const auto drive = derive_drive(std::polar(0.8, -pi), 1.2, arr);
    auto grid = build_grid(700);
    attach_jump_coefficients(grid, drive, arr);
    const auto coup = build_couplings(arr);
    const auto gen = build_generator(coup, drive, arr, grid);

    const int N = 4;
    const std::size_t dim = 16;
    std::vector<Eigen::MatrixXcd> sig(N);
    for (int n = 0; n < N; ++n) sig[n] = sigma_dense(N, n);
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(dim, dim);

    // H_AF(alpha) with the grid-consistent Hermitian drive + H_AA - (i/2) sum P^dag P
    Eigen::MatrixXcd bf = Eigen::MatrixXcd::Zero(dim, dim);
    const Eigen::VectorXcd d = reduced_drive(drive, grid);
    for (int n = 0; n < N; ++n)
        bf += 0.5 * d[n] * sig[n].adjoint() + 0.5 * std::conj(d[n]) * sig[n];
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            if (m != n) bf += coup.Delta(n, m) * sig[n].adjoint() * sig[m];
    for (int q = 0; q < grid.Q; ++q) {
        Eigen::MatrixXcd scat = Eigen::MatrixXcd::Zero(dim, dim);
        for (int n = 0; n < N; ++n)
            scat += grid.phase[(std::size_t)q * N + n] * sig[n];
        for (int s = 0; s < 2; ++s) {
            const Eigen::MatrixXcd P =
                grid.L[2 * (std::size_t)q + s] * drive.alpha * id +
                grid.D[2 * (std::size_t)q + s] * scat;
            bf -= Complex(0.0, 0.5) * P.adjoint() * P;
        }
    }

    Eigen::MatrixXcd gd = -Complex(0.0, 0.5) * gen.flux * id;
    for (int n = 0; n < N; ++n) {
        gd += gen.d[n] * sig[n].adjoint() + gen.e[n] * sig[n];
        for (int m = 0; m < N; ++m) gd += gen.M(n, m) * sig[n].adjoint() * sig[m];
    }
    const double rel = (bf - gd).cwiseAbs().maxCoeff() / bf.cwiseAbs().maxCoeff();
    report(2, rel < 1e-12,
           fmt("generator reduction, N=4: grid-assembled vs closed form, rel err %.2e",
               rel));
}

// ---------------------------------------------------------------- criterion 3
void criterion_3() {
    // Fig. 7: N=1, Omega = 2 pi x 25 MHz, 5000 trajectories
    Scene sc = scene_for("fig7", 300, 8.0, 0.005, 0.4, 314159);
    const auto results = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, 5000);
    const auto mg = mean_ground(results);

    std::vector<double> t_fine;
    for (double t = 0.0; t <= 8.4; t += 0.02) t_fine.push_back(t);
    const auto me = master_equation_evolve(sc.array, Eigen::VectorXcd(sc.gen.d),
                                           sc.couplings, t_fine, 0.002);
    double dev = 0.0;
    for (std::size_t i = 0; i < mg.t.size(); ++i)
        dev = std::max(dev, std::abs(mg.value[i] - lerp(t_fine, me.all_ground, mg.t[i])));
    report(3, dev <= 0.02,
           fmt("N=1 Rabi oracle, 5000 trajectories: max |<P_g> - ME| = %.4f "
               "(<= 0.02) [%.0fs]", dev, now_s()));
}

// ---------------------------------------------------------------- criterion 4
void criterion_4() {
    // Fig. 8: N=3 triangle, Omega = 2 pi x 10 MHz
    Scene sc = scene_for("fig8", 300, 10.0, 0.005, 0.5, 271828);
    const int J = 4000;
    const auto eng = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, J);
    const auto m_eng = mean_ground(eng);

    const Eigen::VectorXcd d = sc.gen.d;
    std::vector<TrajectoryResult> src(J);
    EngineConfig cfg = sc.engine;
    cfg.seed = 161803;
    for (int j = 0; j < J; ++j)
        src[j] = source_mode_trajectory(sc.array, d, sc.couplings, cfg, (std::uint64_t)j);
    const auto m_src = mean_ground(src);

    std::vector<double> t_fine;
    for (double t = 0.0; t <= 10.5; t += 0.02) t_fine.push_back(t);
    const auto me = master_equation_evolve(sc.array, d, sc.couplings, t_fine, 0.002);

    double d_em = 0.0, d_sm = 0.0, d_es = 0.0;
    for (std::size_t i = 0; i < m_eng.t.size(); ++i) {
        d_em = std::max(d_em, std::abs(m_eng.value[i] -
                                       lerp(t_fine, me.all_ground, m_eng.t[i])));
        d_sm = std::max(d_sm, std::abs(m_src.value[i] -
                                       lerp(t_fine, me.all_ground, m_src.t[i])));
        d_es = std::max(d_es, std::abs(m_eng.value[i] - m_src.value[i]));
    }
    const double worst = std::max({d_em, d_sm, d_es});
    report(4, worst <= 0.03,
           fmt("N=3 triangle, %d trajectories: engine-ME %.4f, source-ME %.4f, "
               "engine-source %.4f (<= 0.03) [%.0fs]", J, d_em, d_sm, d_es, now_s()));
}

// ---------------------------------------------------------------- criterion 5
void criterion_5() {
    double worst_mag = 0.0, worst_ph = 0.0;
    for (const double d_l : {0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0}) {
        AtomArray arr;
        arr.positions = {{0.0, 0.0}, {d_l, 0.0}, {0.0, 0.7 * d_l}};
        arr.finalize();
        const auto drive = derive_drive(std::polar(1.0 / 50.0, -pi), 2.0 * d_l, arr);
        auto grid = build_grid(2800);
        attach_jump_coefficients(grid, drive, arr);
        const auto coup = build_couplings(arr);
        const Eigen::VectorXcd dd = reduced_drive(drive, grid);
        const auto me = master_equation_evolve(arr, dd, coup, {80.0}, 0.01);
        const auto cl = classical_steady_state(arr, dd, coup);
        for (int n = 0; n < 3; ++n) {
            const Complex q = me.sigma[0][n], b = cl.beta[n];
            worst_mag = std::max(worst_mag, std::abs(std::abs(q) / std::abs(b) - 1.0));
            double dphi = std::arg(q) - std::arg(b);
            while (dphi > pi) dphi -= 2.0 * pi;
            while (dphi < -pi) dphi += 2.0 * pi;
            worst_ph = std::max(worst_ph, std::abs(dphi));
        }
    }
    report(5, worst_mag <= 0.05 && worst_ph <= 0.05,
           fmt("classical limit (d = 0.5..2 lambda, w0 = 2d, |Omega| = Gamma/50): "
               "max |sigma|/|beta| dev %.4f (<= 0.05), max phase dev %.4f rad "
               "(<= 0.05) [%.0fs]", worst_mag, worst_ph, now_s()));
}

// ---------------------------------------------------------------- criterion 6
void criterion_6() {
    const PhysicalParams phys;
    Scene sc = scene_for("fig3", 300, 1950.0, 0.01, 0.0, 424242);
    const int J = 1920;
    const auto results = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, J);
    const DirectionClass dc{sc.theta_cut};
    const double bin = phys.time_from_ns(10.0);
    const double burn_in = 10.0, duration = sc.engine.duration;

    // fig3(b) pools the backward and sideways directions into one class
    auto pooled = results;
    for (auto& tr : pooled)
        for (auto& r : tr.records)
            if (dc.classify(r.theta) != Direction::Forward) r.theta = pi;

    const auto hf = waiting_times(results, dc, Direction::Forward, bin, 40, burn_in, duration);
    const auto hb = waiting_times(pooled, dc, Direction::Backward, bin, 40, burn_in, duration);
    const auto pf = poisson_reference(hf.rate, bin, 40);
    const auto pb = poisson_reference(hb.rate, bin, 40);

    // the exact conditional-ME density crosses Poisson at ~41 ns at these
    // parameters ("dt <~ 50 ns"); per-bin excess is resolvable below 30 ns
    // (+7.1/+4.0/+1.8%), the 50 ns claim is carried by the cumulative check
    bool bunch = true;
    for (int b = 0; b < 3; ++b)
        if (hf.density[b] <= pf[b]) bunch = false;
    double cum_w = 0.0, cum_p = 0.0;
    for (int b = 0; b < 5; ++b) {
        cum_w += hf.density[b] * hf.bin;
        cum_p += pf[b] * hf.bin;
    }
    const double dip = hb.density[0] / pb[0];
    const bool pass = hf.events >= 10000 && hb.events >= 10000 && bunch &&
                      cum_w > cum_p && dip <= 0.5;
    report(6, pass,
           fmt("N=1 photon statistics: forward events %ld, backward+side %ld (>= 1e4); "
               "forward density > Poisson per bin < 30 ns: %s; P(dt <= 50 ns) / Poisson "
               "= %.3f (> 1); backward+side first bin / Poisson = %.2f (<= 0.5) [%.0fs]",
               hf.events, hb.events, bunch ? "yes" : "NO", cum_w / cum_p, dip, now_s()));
}

// ---------------------------------------------------------------- criterion 7
double flux_ratio_run(Scene& sc, int J, double burn_in) {
    const auto results = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, J);
    long events = 0;
    for (const auto& tr : results)
        for (const auto& r : tr.records)
            if (r.t >= burn_in) ++events;
    const double observed = J * (sc.engine.duration - burn_in);
    return events / (sc.drive.photon_flux() * observed);
}

void criterion_7() {
    RunConfig c0;
    c0.layout = "n0";
    c0.w0_nm = 900.0;
    c0.Omega_MHz = 5.0;
    c0.Q = 300;
    c0.seed = 11;
    c0.seed_set = true;
    Scene s0 = build_scene(c0);
    s0.engine.duration = 1000.0;
    s0.engine.dt = 0.01;
    const double r0 = flux_ratio_run(s0, 4, 10.0);

    Scene s1 = scene_for("fig3", 300, 5000.0, 0.01, 0.0, 22);
    const double r1 = flux_ratio_run(s1, 8, 10.0);

    RunConfig c7;
    c7.layout = "n7";
    c7.d_nm = 660.0;
    c7.w0_nm = 900.0;
    c7.Omega_MHz = 2.0;
    c7.Q = 300;
    c7.seed = 33;
    c7.seed_set = true;
    Scene s7 = build_scene(c7);
    s7.engine.duration = 5200.0;
    s7.engine.dt = 0.02;
    const double r7 = flux_ratio_run(s7, 4, 10.0);

    const bool pass = std::abs(r0 - 1.0) <= 0.02 && std::abs(r1 - 1.0) <= 0.02 &&
                      std::abs(r7 - 1.0) <= 0.02;
    report(7, pass,
           fmt("energy conservation, detected/|alpha|^2: N=0 %.4f, N=1 %.4f, "
               "N=7 %.4f (1.00 +/- 0.02) [%.0fs]", r0, r1, r7, now_s()));
}

// ---------------------------------------------------------------- criterion 8
void criterion_8() {
    const PhysicalParams phys;
    Scene sc = scene_for("fig5", 300, 1200.0, 0.02, 0.0, 777);
    const int J = 10;
    const auto results = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, J);
    const DirectionClass dc{sc.theta_cut};
    const double burn_in = 10.0, duration = sc.engine.duration;
    const double dt_cut = phys.time_from_ns(75.0);

    const auto budget = power_budget(results, dc, sc.drive, burn_in, duration);
    const auto hf = waiting_times(results, dc, Direction::Forward,
                                  phys.time_from_ns(25.0), 120, burn_in, duration);
    long below = 0;
    for (int b = 0; b < 3; ++b) below += hf.counts[b];  // 3 x 25 ns = 75 ns
    const double p75 = (double)below / hf.total_gaps;
    const double poisson75 = poisson_pair_fraction(hf.rate, dt_cut);
    const auto pf = pair_fraction_cdf(results, dc, Direction::Forward, dt_cut,
                                      burn_in, duration);

    const bool ok_R = std::abs(budget.R - 0.55) <= 0.05;
    const bool ok_T = std::abs(budget.T - 0.14) <= 0.03;
    const bool ok_p = std::abs(p75 - 0.10) <= 0.05 && p75 > poisson75;
    const bool ok_pair = std::abs(pf.final_value - 0.20) <= 0.05;
    report(8, ok_R && ok_T && ok_p && ok_pair,
           fmt("N=13 headline: R %.3f (0.55+/-0.05), T %.3f (0.14+/-0.03), "
               "P(dt<75ns) %.3f (0.10+/-0.05, Poisson %.3f), paired fraction %.3f "
               "(0.20+/-0.05); %ld fwd / %ld bwd events [%.0fs]",
               budget.R, budget.T, p75, poisson75, pf.final_value,
               budget.n_forward, budget.n_backward, now_s()));
}

// ---------------------------------------------------------------- criterion 9
void criterion_9() {
    // Non-gating: the 2^19-dimensional Fig. 6 run is a day-scale job on this
    // hardware. Time the integrator on a dense state and document the estimate.
    Scene sc = scene_for("fig6", 300, 1.0, 0.02, 0.0, 1);
    StateVector psi = StateVector::ground(19);
    for (std::size_t j = 0; j < psi.amps.size(); ++j)
        psi.amps[j] = Complex(1.0, 0.5) / double(j + 1);
    psi.norm2 = psi.recompute_norm2();
    const auto t0 = std::chrono::steady_clock::now();
    const int steps = 5;
    for (int k = 0; k < steps; ++k) rk4_step(psi, sc.gen, 0.02);
    const double per_step =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / steps;
    // ~2000 backward events at R ~ 0.82 need ~54000 Gamma^-1 of observed time
    const double est_h = 54000.0 / 0.02 * per_step / 3600.0;
    report(9, true,
           fmt("N=19 (non-gating): %.0f ms per RK4 step on the dense 2^19 state; "
               "a Fig. 6-quality run (~5.4e4 Gamma^-1) extrapolates to ~%.0f h on "
               "this single-core machine — documented, not executed [%.0fs]",
               1e3 * per_step, est_h, now_s()));
}

// --------------------------------------------------------------- criterion 10
std::string records_bytes(const std::vector<TrajectoryResult>& results) {
    const PhysicalParams phys;
    const char* path = "acceptance_records.tmp";
    write_records_csv(path, results, phys);
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::remove(path);
    return ss.str();
}

void criterion_10() {
    Scene sc = scene_for("fig3", 300, 60.0, 0.01, 0.0, 909090);
    std::string ref;
    bool same = true;
    for (const int workers : {1, 2, 3, 1}) {
        sc.engine.workers = workers;
        const auto res = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, 6);
        const std::string bytes = records_bytes(res);
        if (ref.empty())
            ref = bytes;
        else if (bytes != ref)
            same = false;
    }
    report(10, same && !ref.empty(),
           fmt("determinism: photon-record files byte-identical across worker "
               "counts {1,2,3} and repeats (%zu bytes) [%.0fs]", ref.size(), now_s()));
}

}  // namespace

int main(int argc, char** argv) {
    const bool quick = argc > 1 && std::strcmp(argv[1], "--quick") == 0;
    int only = 0;  // --only <n>: run a single criterion
    if (argc > 2 && std::strcmp(argv[1], "--only") == 0) only = std::atoi(argv[2]);
    void (*crit[])() = {criterion_1, criterion_2, criterion_3, criterion_4,
                        criterion_5, criterion_6, criterion_7, criterion_8,
                        criterion_9, criterion_10};
    if (only >= 1 && only <= 10) {
        crit[only - 1]();
    } else {
        criterion_1();
        criterion_2();
        if (!quick) {
            criterion_3();
            criterion_4();
        }
        criterion_5();
        if (!quick) {
            criterion_6();
            criterion_7();
            criterion_8();
            criterion_9();
        }
        criterion_10();
        if (quick) std::printf("(quick mode: criteria 3, 4, 6, 7, 8, 9 skipped)\n");
    }
    std::printf("%s\n", g_failures ? "ACCEPTANCE: FAILED" : "ACCEPTANCE: OK");
    return g_failures ? 1 : 0;
}
