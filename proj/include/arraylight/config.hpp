#ifndef ARRAYLIGHT_CONFIG_HPP
#define ARRAYLIGHT_CONFIG_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "arraylight/engine.hpp"
#include "arraylight/stats.hpp"

namespace arraylight {

// Physical-unit run parameters; converted to internal units in build_scene.
struct RunConfig {
    std::string layout = "n1";  // n1 | n7 | n13 | n19 | file | custom
    std::string coords_file;
    std::vector<Vec2> custom_positions;  // lambda units (set by presets)
    double d_nm = 660.0;
    double w0_nm = 900.0;
    double Omega_MHz = 1.0;      // Omega = 2*pi*Omega_MHz*1e6 rad/s
    double Omega_phase = -pi;    // rad (paper: arg(Omega) = -pi throughout)
    double duration_us = 10.0;
    double dt = 0.01;            // units of 1/Gamma
    int Q = 700;
    int J = 1;
    std::uint64_t seed = 0;
    bool seed_set = false;
    double burn_in = 10.0;       // units of 1/Gamma
    double theta_cut = 0.0;      // rad; 0 = auto (2 * divergence angle)
    double bin_ns = 10.0;
    double dt_cut_ns = 75.0;
    double sample_interval = 0.0;  // units of 1/Gamma; 0 = no traces
    int workers = 1;
    std::string out_dir = "out";
    std::string obliquity = "cos";  // cos | sqrtcos
    PhysicalParams phys;
};

// key = value lines, '#' comments, unknown keys are hard errors.
RunConfig parse_config(const std::string& path);
void apply_config_file(RunConfig& cfg, const std::string& path);
void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where);
// Paper-figure presets: fig3, fig5, fig6, fig7, fig8, fig9.
void apply_preset(RunConfig& cfg, const std::string& name);
void validate_config(const RunConfig& cfg);
// config echo in parseable key = value form (manifest body)
std::string config_echo(const RunConfig& cfg);

// Everything derived from a RunConfig, in internal units.
struct Scene {
    AtomArray array;
    DriveField drive;
    Couplings couplings;
    DetectorGrid grid;
    Generator gen;
    double theta_cut = 0.0;  // resolved (auto or override)
    EngineConfig engine;
};

Scene build_scene(const RunConfig& cfg);

}  // namespace arraylight

#endif
