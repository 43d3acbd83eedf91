#include "arraylight/oracles.hpp"

#include <cmath>
#include <stdexcept>

namespace arraylight {

namespace {

using Mat = Eigen::MatrixXcd;

Mat sigma_dense(int N, int n) {
    const std::size_t dim = std::size_t(1) << N;
    const std::size_t bn = std::size_t(1) << n;
    Mat s = Mat::Zero(dim, dim);
    for (std::size_t j = 0; j < dim; ++j)
        if (j & bn) s(j & ~bn, j) = 1.0;
    return s;
}

}  // namespace

MESolution master_equation_evolve(const AtomArray& array,
                                  const Eigen::VectorXcd& drive_d,
                                  const Couplings& couplings,
                                  const std::vector<double>& t_grid, double dt,
                                  bool start_excited) {
    const int N = array.size();
    if (N > 6) throw std::invalid_argument("master_equation_evolve: N > 6");
    const std::size_t dim = std::size_t(1) << N;

    std::vector<Mat> sig(N);
    for (int n = 0; n < N; ++n) sig[n] = sigma_dense(N, n);

    Mat H = Mat::Zero(dim, dim);
    for (int n = 0; n < N; ++n) {
        H += drive_d[n] * sig[n].adjoint() + std::conj(drive_d[n]) * sig[n];
        for (int m = 0; m < N; ++m)
            if (m != n) H += couplings.Delta(n, m) * sig[n].adjoint() * sig[m];
    }
    // A = sum_nm Gamma_nm sigma_m^dag sigma_n (anticommutator part)
    Mat A = Mat::Zero(dim, dim);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            A += couplings.Gamma(n, m) * sig[m].adjoint() * sig[n];

    auto rhs = [&](const Mat& rho) {
        Mat out = Complex(0.0, -1.0) * (H * rho - rho * H);
        out -= 0.5 * (A * rho + rho * A);
        for (int n = 0; n < N; ++n)
            for (int m = 0; m < N; ++m)
                out += couplings.Gamma(n, m).real() * (sig[n] * rho * sig[m].adjoint());
        return out;
    };

    Mat rho = Mat::Zero(dim, dim);
    if (start_excited)
        rho(dim - 1, dim - 1) = 1.0;
    else
        rho(0, 0) = 1.0;

    MESolution sol;
    sol.times = t_grid;
    double t = 0.0;
    auto record = [&]() {
        sol.all_ground.push_back(rho(0, 0).real());
        double etot = 0.0;
        std::vector<double> en(N);
        std::vector<Complex> sn(N);
        for (int n = 0; n < N; ++n) {
            en[n] = (sig[n].adjoint() * sig[n] * rho).trace().real();
            sn[n] = (sig[n] * rho).trace();
            etot += en[n];
        }
        sol.excited_total.push_back(etot);
        sol.excited.push_back(std::move(en));
        sol.sigma.push_back(std::move(sn));
        sol.max_trace_err = std::max(sol.max_trace_err, std::abs(rho.trace().real() - 1.0));
        if (sol.max_trace_err > 1e-6)
            throw std::runtime_error("master_equation_evolve: trace drift > 1e-6");
    };
    for (const double target : t_grid) {
        while (t < target - 1e-12) {
            const double h = std::min(dt, target - t);
            const Mat k1 = rhs(rho);
            const Mat k2 = rhs(rho + 0.5 * h * k1);
            const Mat k3 = rhs(rho + 0.5 * h * k2);
            const Mat k4 = rhs(rho + h * k3);
            rho += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            t += h;
        }
        record();
    }
    return sol;
}

TrajectoryResult source_mode_trajectory(const AtomArray& array,
                                        const Eigen::VectorXcd& drive_d,
                                        const Couplings& couplings,
                                        const EngineConfig& cfg,
                                        std::uint64_t trajectory_index) {
    const int N = array.size();
    const SourceModes modes = source_modes(array);
    for (int k = 0; k < N; ++k)
        if (modes.rates[k] < -1e-9)
            throw std::runtime_error("source_mode_trajectory: negative decay rate");

    // H_eff = H_AA + Hermitian drive - (i/2) sum_nm Gamma_nm sigma_n^dag sigma_m
    Generator gen;
    gen.N = N;
    gen.flux = 0.0;
    gen.M = Eigen::MatrixXcd::Zero(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            gen.M(n, m) = (n == m ? Complex(0.0) : couplings.Delta(n, m)) -
                          Complex(0.0, 0.5) * couplings.Gamma(n, m);
    gen.d = drive_d;
    gen.e = drive_d.conjugate();

    TrajectoryResult result;
    Rng rng(cfg.seed, trajectory_index);
    StateVector psi = StateVector::ground(N);
    StateVector psi0 = psi, psij = psi;
    const std::size_t dim = psi.amps.size();
    double t = 0.0;
    double threshold = rng.uniform();
    double next_sample = (cfg.sample_interval > 0.0) ? 0.0 : cfg.duration + 1.0;
    const double eps = 1e-12 * cfg.duration;

    auto lowered = [&](int n) {
        std::vector<Complex> out(dim, Complex(0));
        const std::size_t bn = std::size_t(1) << n;
        for (std::size_t j = 0; j < dim; ++j)
            if (j & bn) out[j & ~bn] = psi.amps[j];
        return out;
    };
    auto sample = [&]() {
        while (t >= next_sample - eps && next_sample <= cfg.duration) {
            result.traces.push_back({t, psi.excited_sum() / psi.norm2, 0.0,
                                     std::norm(psi.amps[0]) / psi.norm2});
            next_sample += cfg.sample_interval;
        }
    };

    sample();
    while (t < cfg.duration - eps) {
        const double dt = std::min(cfg.dt, cfg.duration - t);
        psi0 = psi;
        rk4_step(psi, gen, dt);
        if (psi.norm2 < threshold) {
            const double tau = locate_jump(psi0, gen, dt, threshold, psij);
            psi = psij;
            t += tau;
            // p_k = rate_k |sum_n V_nk sigma_n psi|^2
            std::vector<std::vector<Complex>> low(N);
            for (int n = 0; n < N; ++n) low[n] = lowered(n);
            std::vector<double> p(N, 0.0);
            double total = 0.0;
            std::vector<std::vector<Complex>> cpsi(N, std::vector<Complex>(dim, Complex(0)));
            for (int k = 0; k < N; ++k) {
                for (int n = 0; n < N; ++n) {
                    const double V = modes.vectors(n, k);
                    if (V == 0.0) continue;
                    for (std::size_t j = 0; j < dim; ++j) cpsi[k][j] += V * low[n][j];
                }
                double nn = 0.0;
                for (std::size_t j = 0; j < dim; ++j) nn += std::norm(cpsi[k][j]);
                p[k] = modes.rates[k] * nn;
                total += p[k];
            }
            if (total <= 0.0)
                throw std::runtime_error("source_mode_trajectory: vanishing jump rate");
            const double target = rng.uniform() * total;
            double acc = 0.0;
            int pick = N - 1;
            for (int k = 0; k < N; ++k) {
                acc += p[k];
                if (acc >= target) {
                    pick = k;
                    break;
                }
            }
            psi.amps = std::move(cpsi[pick]);
            const double n2 = psi.recompute_norm2();
            if (n2 <= 0.0) throw std::runtime_error("source_mode_trajectory: zero-norm jump");
            const double inv = 1.0 / std::sqrt(n2);
            for (auto& a : psi.amps) a *= inv;
            psi.norm2 = 1.0;
            result.records.push_back({t, -1, pick, 0.0, 0.0});
            threshold = rng.uniform();
        } else {
            t += dt;
        }
        sample();
    }
    return result;
}

ClassicalDipoles classical_steady_state(const AtomArray& array,
                                        const Eigen::VectorXcd& drive_d,
                                        const Couplings& couplings) {
    const int N = array.size();
    Eigen::MatrixXcd M(N, N);
    for (int n = 0; n < N; ++n)
        for (int m = 0; m < N; ++m)
            M(n, m) = Complex(0.0, 1.0) * (n == m ? Complex(0.0) : couplings.Delta(n, m)) +
                      0.5 * couplings.Gamma(n, m);
    const Eigen::VectorXcd b = Complex(0.0, -1.0) * drive_d;
    Eigen::FullPivLU<Eigen::MatrixXcd> lu(M);
    if (!lu.isInvertible()) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(M);
        const double cond =
            svd.singularValues()(0) / svd.singularValues()(svd.singularValues().size() - 1);
        throw std::runtime_error("classical_steady_state: singular system, cond = " +
                                 std::to_string(cond));
    }
    ClassicalDipoles out;
    out.beta = lu.solve(b);
    out.residual = (M * out.beta - b).norm() / std::max(1e-300, b.norm());
    if (out.residual > 1e-10)
        throw std::runtime_error("classical_steady_state: residual > 1e-10");
    return out;
}

ClassicalPower classical_power(const AtomArray& array, const DriveField& drive,
                               const DetectorGrid& grid,
                               const ClassicalDipoles& dip, double theta_cut) {
    const int N = array.size();
    ClassicalPower out;
    for (int q = 0; q < grid.Q; ++q) {
        Complex scat(0.0);
        for (int n = 0; n < N; ++n)
            scat += grid.phase[(std::size_t)q * N + n] * dip.beta[n];
        double pq = 0.0;
        for (int s = 0; s < 2; ++s)
            pq += std::norm(grid.L[2 * (std::size_t)q + s] * drive.alpha +
                            grid.D[2 * (std::size_t)q + s] * scat);
        const double frac = pq / drive.photon_flux();
        if (grid.theta[q] < theta_cut)
            out.T += frac;
        else if (grid.theta[q] > pi - theta_cut)
            out.R += frac;
        else
            out.S += frac;
    }
    return out;
}

ScanResult low_intensity_scan(Layout layout, const std::vector<double>& d_values,
                              const std::vector<double>& w0_values, int Q_target,
                              Obliquity obliquity) {
    ScanResult res;
    res.d_values = d_values;
    res.w0_values = w0_values;
    res.R.assign(d_values.size(), std::vector<double>(w0_values.size(), 0.0));
    res.T.assign(d_values.size(), std::vector<double>(w0_values.size(), 0.0));
    const Complex Omega(0.02, 0.0);  // low intensity; exact for the linear model
    for (std::size_t i = 0; i < d_values.size(); ++i) {
        const AtomArray array = build_hex_array(layout, d_values[i]);
        const Couplings coup = build_couplings(array);
        for (std::size_t k = 0; k < w0_values.size(); ++k) {
            const DriveField drive = derive_drive(Omega, w0_values[k], array);
            DetectorGrid grid = build_grid(Q_target);
            attach_jump_coefficients(grid, drive, array, obliquity);
            const auto dip =
                classical_steady_state(array, reduced_drive(drive, grid), coup);
            const double theta_cut = 2.0 * divergence_angle(w0_values[k]);
            const auto pw = classical_power(array, drive, grid, dip,
                                            std::min(theta_cut, pi / 2.0 - 1e-6));
            res.R[i][k] = pw.R;
            res.T[i][k] = pw.T;
            if (pw.R > res.best_R) {
                res.best_R = pw.R;
                res.best_d = d_values[i];
                res.best_w0 = w0_values[k];
            }
        }
    }
    return res;
}

}  // namespace arraylight
