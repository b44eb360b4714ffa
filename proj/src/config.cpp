#include "chemotax/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chemotax {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

[[noreturn]] void bad(const std::string& key, const std::string& msg) {
    throw std::invalid_argument(key + ": " + msg);
}

double to_double(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    double x = std::strtod(s, &end);
    if (end == s || *end != '\0' || !std::isfinite(x))
        bad(key, "expected a finite number, got '" + value + "'");
    return x;
}

long to_long(const std::string& key, const std::string& value) {
    const char* s = value.c_str();
    char* end = nullptr;
    long x = std::strtol(s, &end, 10);
    if (end == s || *end != '\0')
        bad(key, "expected an integer, got '" + value + "'");
    return x;
}

double positive(const std::string& key, const std::string& value) {
    double x = to_double(key, value);
    if (!(x > 0.0)) bad(key, "must be > 0");
    return x;
}

double non_negative(const std::string& key, const std::string& value) {
    double x = to_double(key, value);
    if (!(x >= 0.0)) bad(key, "must be >= 0");
    return x;
}

int at_least(const std::string& key, const std::string& value, long lo) {
    long x = to_long(key, value);
    if (x < lo) bad(key, "must be >= " + std::to_string(lo));
    return static_cast<int>(x);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value) {
    ModelParams& p = cfg.params;
    if (key == "n")
        p.n = at_least(key, value, 2);
    else if (key == "tau") {
        long t = to_long(key, value);
        if (t != 0 && t != 1) bad(key, "must be 0 or 1");
        p.tau = static_cast<int>(t);
    } else if (key == "variant") {
        if (value == "local")
            p.variant = Variant::local;
        else if (value == "nonlocal")
            p.variant = Variant::nonlocal;
        else
            bad(key, "must be 'local' or 'nonlocal', got '" + value + "'");
    } else if (key == "chi")
        p.chi = positive(key, value);
    else if (key == "xi")
        p.xi = positive(key, value);
    else if (key == "alpha")
        p.alpha = positive(key, value);
    else if (key == "beta")
        p.beta = positive(key, value);
    else if (key == "gamma0")
        p.gamma0 = positive(key, value);
    else if (key == "gamma1")
        p.gamma1 = positive(key, value);
    else if (key == "delta")
        p.delta = positive(key, value);
    else if (key == "k")
        p.k = positive(key, value);
    else if (key == "l")
        p.l = positive(key, value);
    else if (key == "mesh_file")
        cfg.mesh_file = value;
    else if (key == "radius")
        cfg.radius = positive(key, value);
    else if (key == "n_rings")
        cfg.n_rings = at_least(key, value, 1);
    else if (key == "dt")
        cfg.dt = positive(key, value);
    else if (key == "t_end")
        cfg.t_end = positive(key, value);
    else if (key == "blowup_threshold")
        cfg.blowup_threshold = positive(key, value);
    else if (key == "record_every")
        cfg.record_every = at_least(key, value, 1);
    else if (key == "steady_rate_tol")
        cfg.steady.rate_tol = positive(key, value);
    else if (key == "steady_consecutive")
        cfg.steady.consecutive = at_least(key, value, 1);
    else if (key == "steady_floor")
        cfg.steady.floor = positive(key, value);
    else if (key == "chem_tol")
        cfg.solver.chem_tol = positive(key, value);
    else if (key == "transport_tol")
        cfg.solver.transport_tol = positive(key, value);
    else if (key == "max_iter_factor")
        cfg.solver.max_iter_factor = at_least(key, value, 1);
    else if (key == "u0_preset")
        cfg.u0_preset = value;
    else if (key == "u0_amp")
        cfg.u0_amp = non_negative(key, value);
    else if (key == "v0_preset")
        cfg.v0_preset = value;
    else if (key == "v0_amp")
        cfg.v0_amp = non_negative(key, value);
    else if (key == "w0_preset")
        cfg.w0_preset = value;
    else if (key == "w0_amp")
        cfg.w0_amp = non_negative(key, value);
    else if (key == "output_dir")
        cfg.output_dir = value;
    else
        bad(key, "unknown key");
}

RunConfig parse_config(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("config: cannot open " + path);
    RunConfig cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(is, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw std::invalid_argument(
                "config: line " + std::to_string(line_no) +
                ": expected key = value, got '" + line + "'");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        try {
            apply_config_entry(cfg, key, value);
        } catch (const std::invalid_argument& e) {
            throw std::invalid_argument("config: line " +
                                        std::to_string(line_no) + ": " +
                                        e.what());
        }
    }
    return cfg;
}

std::string serialize_config(const RunConfig& cfg) {
    const ModelParams& p = cfg.params;
    std::ostringstream os;
    os << "n = " << p.n << "\n";
    os << "tau = " << p.tau << "\n";
    os << "variant = " << (p.variant == Variant::local ? "local" : "nonlocal")
       << "\n";
    os << "chi = " << fmt(p.chi) << "\n";
    os << "xi = " << fmt(p.xi) << "\n";
    os << "alpha = " << fmt(p.alpha) << "\n";
    os << "beta = " << fmt(p.beta) << "\n";
    os << "gamma0 = " << fmt(p.gamma0) << "\n";
    os << "gamma1 = " << fmt(p.gamma1) << "\n";
    os << "delta = " << fmt(p.delta) << "\n";
    os << "k = " << fmt(p.k) << "\n";
    os << "l = " << fmt(p.l) << "\n";
    os << "mesh_file = " << cfg.mesh_file << "\n";
    os << "radius = " << fmt(cfg.radius) << "\n";
    os << "n_rings = " << cfg.n_rings << "\n";
    os << "dt = " << fmt(cfg.dt) << "\n";
    os << "t_end = " << fmt(cfg.t_end) << "\n";
    os << "blowup_threshold = " << fmt(cfg.blowup_threshold) << "\n";
    os << "record_every = " << cfg.record_every << "\n";
    os << "steady_rate_tol = " << fmt(cfg.steady.rate_tol) << "\n";
    os << "steady_consecutive = " << cfg.steady.consecutive << "\n";
    os << "steady_floor = " << fmt(cfg.steady.floor) << "\n";
    os << "chem_tol = " << fmt(cfg.solver.chem_tol) << "\n";
    os << "transport_tol = " << fmt(cfg.solver.transport_tol) << "\n";
    os << "max_iter_factor = " << cfg.solver.max_iter_factor << "\n";
    os << "u0_preset = " << cfg.u0_preset << "\n";
    os << "u0_amp = " << fmt(cfg.u0_amp) << "\n";
    os << "v0_preset = " << cfg.v0_preset << "\n";
    os << "v0_amp = " << fmt(cfg.v0_amp) << "\n";
    os << "w0_preset = " << cfg.w0_preset << "\n";
    os << "w0_amp = " << fmt(cfg.w0_amp) << "\n";
    os << "output_dir = " << cfg.output_dir << "\n";
    return os.str();
}

Field preset_initial(const std::string& preset, double amplitude,
                     const TriMesh& mesh) {
    const size_t n = mesh.vertices.size();
    std::vector<double> vals(n);
    if (preset == "gaussian_bell_u") {
        for (size_t i = 0; i < n; ++i) {
            double r2 = mesh.vertices[i][0] * mesh.vertices[i][0] +
                        mesh.vertices[i][1] * mesh.vertices[i][1];
            vals[i] = amplitude * std::exp(-r2) * (81.0 - r2);
        }
    } else if (preset == "gaussian_v") {
        for (size_t i = 0; i < n; ++i) {
            double r2 = mesh.vertices[i][0] * mesh.vertices[i][0] +
                        mesh.vertices[i][1] * mesh.vertices[i][1];
            vals[i] = amplitude * std::exp(-r2);
        }
    } else if (preset == "constant") {
        for (size_t i = 0; i < n; ++i) vals[i] = amplitude;
    } else {
        throw std::invalid_argument("preset: unknown initial-data preset '" +
                                    preset + "'");
    }
    return Field(mesh, std::move(vals));
}

TriMesh make_mesh(const RunConfig& cfg) {
    if (!cfg.mesh_file.empty()) return load_mesh(cfg.mesh_file);
    return generate_disk_mesh(cfg.radius, cfg.n_rings);
}

SimState initial_state(const RunConfig& cfg, const TriMesh& mesh) {
    SimState s;
    s.u = preset_initial(cfg.u0_preset, cfg.u0_amp, mesh);
    if (cfg.params.tau == 1) {
        s.v = preset_initial(cfg.v0_preset, cfg.v0_amp, mesh);
        s.w = preset_initial(cfg.w0_preset, cfg.w0_amp, mesh);
    }
    return s;
}

}  // namespace chemotax
