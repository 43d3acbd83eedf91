#include "arraylight/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace arraylight {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

double to_double(const std::string& v, const std::string& where) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
        x = std::stod(v, &pos);
    } catch (const std::exception&) {
        throw std::runtime_error(where + ": expected a number, got '" + v + "'");
    }
    if (pos != v.size())
        throw std::runtime_error(where + ": trailing junk in number '" + v + "'");
    return x;
}

double to_positive(const std::string& v, const std::string& where) {
    const double x = to_double(v, where);
    if (x <= 0.0) throw std::runtime_error(where + ": value must be positive");
    return x;
}

std::vector<Vec2> parse_positions(const std::string& v, const std::string& where) {
    // "x1,y1; x2,y2; ..." in units of lambda
    std::vector<Vec2> out;
    std::istringstream ss(v);
    std::string pair;
    while (std::getline(ss, pair, ';')) {
        pair = trim(pair);
        if (pair.empty()) continue;
        const auto comma = pair.find(',');
        if (comma == std::string::npos)
            throw std::runtime_error(where + ": expected 'x,y' pair, got '" + pair + "'");
        out.push_back({to_double(trim(pair.substr(0, comma)), where),
                       to_double(trim(pair.substr(comma + 1)), where)});
    }
    if (out.empty()) throw std::runtime_error(where + ": no positions given");
    return out;
}

}  // namespace

void apply_key(RunConfig& cfg, const std::string& key, const std::string& value,
               const std::string& where) {
    if (key == "preset") apply_preset(cfg, value);
    else if (key == "layout") cfg.layout = value;
    else if (key == "coords_file") cfg.coords_file = value;
    else if (key == "positions") cfg.custom_positions = parse_positions(value, where);
    else if (key == "d_nm") cfg.d_nm = to_positive(value, where);
    else if (key == "w0_nm") cfg.w0_nm = to_positive(value, where);
    else if (key == "Omega_MHz") cfg.Omega_MHz = to_positive(value, where);
    else if (key == "Omega_phase") cfg.Omega_phase = to_double(value, where);
    else if (key == "duration_us") cfg.duration_us = to_positive(value, where);
    else if (key == "dt") cfg.dt = to_positive(value, where);
    else if (key == "Q") cfg.Q = (int)to_positive(value, where);
    else if (key == "J") cfg.J = (int)to_positive(value, where);
    else if (key == "seed") {
        cfg.seed = (std::uint64_t)std::stoull(value);
        cfg.seed_set = true;
    } else if (key == "burn_in") cfg.burn_in = to_double(value, where);
    else if (key == "theta_cut") cfg.theta_cut = to_double(value, where);
    else if (key == "bin_ns") cfg.bin_ns = to_positive(value, where);
    else if (key == "dt_cut_ns") cfg.dt_cut_ns = to_positive(value, where);
    else if (key == "sample_interval") cfg.sample_interval = to_double(value, where);
    else if (key == "workers") cfg.workers = (int)to_positive(value, where);
    else if (key == "out_dir") cfg.out_dir = value;
    else if (key == "obliquity") cfg.obliquity = value;
    else throw std::runtime_error(where + ": unknown key '" + key + "'");
}

RunConfig parse_config(const std::string& path) {
    RunConfig cfg;
    apply_config_file(cfg, path);
    validate_config(cfg);
    return cfg;
}

void apply_config_file(RunConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("parse_config: cannot open " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        const std::string where = path + ":" + std::to_string(lineno);
        if (eq == std::string::npos)
            throw std::runtime_error(where + ": expected 'key = value'");
        apply_key(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
    }
}

void apply_preset(RunConfig& cfg, const std::string& name) {
    if (name == "fig3") {
        cfg.layout = "n1";
        cfg.Omega_MHz = 3.0;
        cfg.w0_nm = 430.0;
        cfg.bin_ns = 10.0;
        cfg.dt_cut_ns = 50.0;
    } else if (name == "fig5") {
        cfg.layout = "n13";
        cfg.d_nm = 660.0;
        cfg.w0_nm = 900.0;
        cfg.Omega_MHz = 1.0;
        cfg.bin_ns = 25.0;
        cfg.dt_cut_ns = 75.0;
    } else if (name == "fig6") {
        cfg.layout = "n19";
        cfg.d_nm = 660.0;
        cfg.w0_nm = 1100.0;
        cfg.Omega_MHz = 0.5;
        cfg.bin_ns = 25.0;
        cfg.dt_cut_ns = 175.0;
    } else if (name == "fig7") {
        cfg.layout = "n1";
        cfg.Omega_MHz = 25.0;
        cfg.w0_nm = 1.2 * cfg.phys.lambda_nm;
        cfg.bin_ns = 10.0;
    } else if (name == "fig8") {
        cfg.layout = "custom";
        // r1=(0,0), r2=(d,0), r3=(0,0.7d), d=0.6 lambda
        cfg.custom_positions = {{0.0, 0.0}, {0.6, 0.0}, {0.0, 0.42}};
        cfg.Omega_MHz = 10.0;
        cfg.w0_nm = 1.2 * cfg.phys.lambda_nm;
    } else if (name == "fig9") {
        // triangle scanned over d with w0 = 2d; this preset fixes one point
        // (d = lambda); the scan itself is the oracle subcommand's job
        cfg.layout = "custom";
        cfg.custom_positions = {{0.0, 0.0}, {1.0, 0.0}, {0.0, 0.7}};
        cfg.Omega_MHz = 6.0 / 50.0;  // |Omega| = Gamma/50
        cfg.w0_nm = 2.0 * cfg.phys.lambda_nm;
    } else {
        throw std::runtime_error("apply_preset: unknown preset '" + name + "'");
    }
}

void validate_config(const RunConfig& cfg) {
    if (!cfg.seed_set)
        throw std::runtime_error("config: 'seed' is mandatory (no wall-clock seeding)");
    if (cfg.layout != "n0" && cfg.layout != "n1" && cfg.layout != "n7" &&
        cfg.layout != "n13" && cfg.layout != "n19" && cfg.layout != "file" &&
        cfg.layout != "custom")
        throw std::runtime_error("config: unknown layout '" + cfg.layout + "'");
    if (cfg.layout == "file" && cfg.coords_file.empty())
        throw std::runtime_error("config: layout=file requires coords_file");
    if (cfg.layout == "custom" && cfg.custom_positions.empty())
        throw std::runtime_error("config: layout=custom requires positions");
    if (cfg.obliquity != "cos" && cfg.obliquity != "sqrtcos")
        throw std::runtime_error("config: obliquity must be cos or sqrtcos");
    if (cfg.theta_cut < 0.0 || cfg.theta_cut >= pi / 2.0)
        throw std::runtime_error("config: theta_cut must be in [0, pi/2)");
    if (cfg.Q < 2) throw std::runtime_error("config: Q must be >= 2");
}

std::string config_echo(const RunConfig& cfg) {
    std::ostringstream os;
    char buf[64];
    auto num = [&](double x) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        return std::string(buf);
    };
    os << "layout = " << cfg.layout << "\n";
    if (!cfg.coords_file.empty()) os << "coords_file = " << cfg.coords_file << "\n";
    if (!cfg.custom_positions.empty()) {
        os << "positions = ";
        for (std::size_t i = 0; i < cfg.custom_positions.size(); ++i)
            os << (i ? "; " : "") << num(cfg.custom_positions[i][0]) << ","
               << num(cfg.custom_positions[i][1]);
        os << "\n";
    }
    os << "d_nm = " << num(cfg.d_nm) << "\n";
    os << "w0_nm = " << num(cfg.w0_nm) << "\n";
    os << "Omega_MHz = " << num(cfg.Omega_MHz) << "\n";
    os << "Omega_phase = " << num(cfg.Omega_phase) << "\n";
    os << "duration_us = " << num(cfg.duration_us) << "\n";
    os << "dt = " << num(cfg.dt) << "\n";
    os << "Q = " << cfg.Q << "\n";
    os << "J = " << cfg.J << "\n";
    os << "seed = " << cfg.seed << "\n";
    os << "burn_in = " << num(cfg.burn_in) << "\n";
    os << "theta_cut = " << num(cfg.theta_cut) << "\n";
    os << "bin_ns = " << num(cfg.bin_ns) << "\n";
    os << "dt_cut_ns = " << num(cfg.dt_cut_ns) << "\n";
    os << "sample_interval = " << num(cfg.sample_interval) << "\n";
    os << "workers = " << cfg.workers << "\n";
    os << "out_dir = " << cfg.out_dir << "\n";
    os << "obliquity = " << cfg.obliquity << "\n";
    return os.str();
}

Scene build_scene(const RunConfig& cfg) {
    validate_config(cfg);
    Scene sc;
    if (cfg.layout == "n0") {
        // laser only, no atoms
    } else if (cfg.layout == "file") {
        sc.array = load_array_file(cfg.coords_file, cfg.phys);
    } else if (cfg.layout == "custom") {
        sc.array.positions = cfg.custom_positions;
        sc.array.finalize();
    } else {
        const Layout lay = (cfg.layout == "n1")    ? Layout::N1
                           : (cfg.layout == "n7")  ? Layout::N7
                           : (cfg.layout == "n13") ? Layout::N13
                                                   : Layout::N19;
        sc.array = build_hex_array(lay, cfg.phys.length_from_nm(cfg.d_nm));
    }
    const double w0 = cfg.phys.length_from_nm(cfg.w0_nm);
    const Complex Omega = std::polar(cfg.phys.rate_from_MHz(cfg.Omega_MHz), cfg.Omega_phase);
    sc.drive = derive_drive(Omega, w0, sc.array);
    sc.couplings = build_couplings(sc.array);
    sc.grid = build_grid(cfg.Q);
    const Obliquity obl = (cfg.obliquity == "cos") ? Obliquity::Cos : Obliquity::SqrtCos;
    attach_jump_coefficients(sc.grid, sc.drive, sc.array, obl);
    sc.gen = build_generator(sc.couplings, sc.drive, sc.array, sc.grid);
    sc.theta_cut = (cfg.theta_cut > 0.0) ? cfg.theta_cut
                                         : 2.0 * divergence_angle(w0);
    if (sc.theta_cut >= pi / 2.0) sc.theta_cut = pi / 2.0 - 1e-6;
    sc.engine.duration = cfg.phys.time_from_us(cfg.duration_us);
    sc.engine.dt = cfg.dt;
    sc.engine.sample_interval = cfg.sample_interval;
    sc.engine.theta_cut = sc.theta_cut;
    sc.engine.seed = cfg.seed;
    sc.engine.workers = cfg.workers;
    return sc;
}

}  // namespace arraylight
