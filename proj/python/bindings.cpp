#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "arraylight/config.hpp"
#include "arraylight/oracles.hpp"

namespace py = pybind11;
using namespace arraylight;

namespace {

RunConfig make_config(const std::string& layout, double d_nm, double w0_nm,
                      double Omega_MHz, double duration_us, double dt, int Q, int J,
                      std::uint64_t seed) {
    RunConfig cfg;
    cfg.layout = layout;
    cfg.d_nm = d_nm;
    cfg.w0_nm = w0_nm;
    cfg.Omega_MHz = Omega_MHz;
    cfg.duration_us = duration_us;
    cfg.dt = dt;
    cfg.Q = Q;
    cfg.J = J;
    cfg.seed = seed;
    cfg.seed_set = true;
    return cfg;
}

}  // namespace

PYBIND11_MODULE(pyarraylight, m) {
    m.doc() = "Quantum-trajectory photon statistics of a driven 2D atomic array";

    py::class_<PhotonRecord>(m, "PhotonRecord")
        .def_readonly("t", &PhotonRecord::t)
        .def_readonly("q", &PhotonRecord::q)
        .def_readonly("s", &PhotonRecord::s)
        .def_readonly("theta", &PhotonRecord::theta)
        .def_readonly("phi", &PhotonRecord::phi);

    m.def("simulate",
          [](const std::string& layout, double d_nm, double w0_nm, double Omega_MHz,
             double duration_us, double dt, int Q, int J, std::uint64_t seed) {
              const RunConfig cfg = make_config(layout, d_nm, w0_nm, Omega_MHz,
                                                duration_us, dt, Q, J, seed);
              const Scene sc = build_scene(cfg);
              const auto results = run_ensemble(sc.gen, sc.grid, sc.drive, sc.engine, J);
              std::vector<std::vector<PhotonRecord>> out;
              for (const auto& tr : results) out.push_back(tr.records);
              return out;
          },
          py::arg("layout"), py::arg("d_nm") = 660.0, py::arg("w0_nm") = 900.0,
          py::arg("Omega_MHz") = 1.0, py::arg("duration_us") = 1.0,
          py::arg("dt") = 0.01, py::arg("Q") = 700, py::arg("J") = 1, py::arg("seed"),
          "Run a trajectory ensemble; returns per-trajectory photon records "
          "(times in units of 1/Gamma).");

    m.def("grid_residuals",
          [](const std::string& layout, double d_nm, double w0_nm, int Q) {
              RunConfig cfg = make_config(layout, d_nm, w0_nm, 1.0, 1.0, 0.01, Q, 1, 1);
              const Scene sc = build_scene(cfg);
              double res_LD = 0.0;
              if (sc.array.size() > 0)
                  for (const double r : check_sum_LD(sc.grid, sc.drive, sc.array))
                      res_LD = std::max(res_LD, r);
              return py::make_tuple(check_sum_F(sc.grid, sc.drive),
                                    sc.array.size() ? check_sum_D(sc.grid, sc.array) : 0.0,
                                    res_LD);
          },
          py::arg("layout"), py::arg("d_nm") = 660.0, py::arg("w0_nm") = 900.0,
          py::arg("Q") = 700, "Quadrature identity residuals (res_F, res_D, res_LD).");

    m.def("couplings",
          [](const std::string& layout, double d_nm) {
              RunConfig cfg = make_config(layout, d_nm, 900.0, 1.0, 1.0, 0.01, 700, 1, 1);
              const Scene sc = build_scene(cfg);
              const int N = sc.array.size();
              std::vector<std::vector<double>> delta(N, std::vector<double>(N)),
                  gamma(N, std::vector<double>(N));
              for (int n = 0; n < N; ++n)
                  for (int m2 = 0; m2 < N; ++m2) {
                      delta[n][m2] = sc.couplings.Delta(n, m2).real();
                      gamma[n][m2] = sc.couplings.Gamma(n, m2).real();
                  }
              return py::make_tuple(delta, gamma);
          },
          py::arg("layout"), py::arg("d_nm") = 660.0,
          "Closed-form (Delta_nm, Gamma_nm) in units of Gamma.");

    m.def("classical_rt",
          [](const std::string& layout, double d_nm, double w0_nm, int Q) {
              RunConfig cfg = make_config(layout, d_nm, w0_nm, 0.12, 1.0, 0.01, Q, 1, 1);
              const Scene sc = build_scene(cfg);
              const auto dip = classical_steady_state(
                  sc.array, reduced_drive(sc.drive, sc.grid), sc.couplings);
              const auto pw =
                  classical_power(sc.array, sc.drive, sc.grid, dip, sc.theta_cut);
              return py::make_tuple(pw.R, pw.T, pw.S);
          },
          py::arg("layout"), py::arg("d_nm") = 660.0, py::arg("w0_nm") = 900.0,
          py::arg("Q") = 2800, "Low-intensity classical (R, T, S).");
}
