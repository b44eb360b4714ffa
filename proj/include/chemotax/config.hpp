#pragma once

#include <string>

#include "chemotax/fem.hpp"
#include "chemotax/mesh.hpp"
#include "chemotax/simulator.hpp"
#include "chemotax/theory.hpp"

namespace chemotax {

// A full run description: model coefficients, mesh source, stepping, and
// initial-data presets. Parsed from key=value files.
struct RunConfig {
    ModelParams params;

    std::string mesh_file;  // when empty, generate a disk mesh
    double radius = 9.0;
    int n_rings = 40;

    double dt = 1e-5;
    double t_end = 0.1;
    double blowup_threshold = 1e4;
    int record_every = 10;

    SteadyCfg steady;
    SolverCfg solver;

    std::string u0_preset = "gaussian_bell_u";
    double u0_amp = 15.0;
    std::string v0_preset = "gaussian_v";
    double v0_amp = 1.0;
    std::string w0_preset = "gaussian_v";
    double w0_amp = 1.0;

    std::string output_dir = ".";
};

// key=value lines, `#` comments, blank lines ignored. Unknown keys and
// malformed values are errors naming the key and line number; invariant
// violations (dt <= 0, negative amplitudes, ...) are errors naming the key.
RunConfig parse_config(const std::string& path);

// Applies one `key=value` assignment; shared by config files, sweep row
// overrides, and tests. Throws std::invalid_argument naming the key.
void apply_config_entry(RunConfig& cfg, const std::string& key,
                        const std::string& value);

// Emits every key in a fixed order; parse(serialize(c)) == c.
std::string serialize_config(const RunConfig& cfg);

// Presets: gaussian_bell_u -> amp*exp(-r^2)*(81-r^2);
//          gaussian_v      -> amp*exp(-r^2);
//          constant        -> amp.
// Throws std::invalid_argument on an unknown id.
Field preset_initial(const std::string& preset, double amplitude,
                     const TriMesh& mesh);

// Builds the mesh named by the config (generate or load).
TriMesh make_mesh(const RunConfig& cfg);

// Assembles the initial state per the config (u always; v, w only for
// tau=1).
SimState initial_state(const RunConfig& cfg, const TriMesh& mesh);

}  // namespace chemotax
