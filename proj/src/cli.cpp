#include "chemotax/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "chemotax/config.hpp"
#include "chemotax/simulator.hpp"
#include "chemotax/sweep.hpp"
#include "chemotax/theory.hpp"

namespace chemotax {

namespace {

namespace fs = std::filesystem;

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

int cmd_mesh_gen(double radius, int rings, const std::string& out_path,
                 std::ostream& out) {
    TriMesh mesh = generate_disk_mesh(radius, rings);
    save_mesh(mesh, out_path);
    out << "wrote " << out_path << " (" << mesh.vertices.size()
        << " vertices, " << mesh.triangles.size() << " triangles, area "
        << fmt(mesh_area(mesh)) << ")\n";
    return 0;
}

int cmd_classify(const ModelParams& params, std::ostream& out) {
    RegimeVerdict r = classify(params);
    out << to_string(r.verdict) << " (" << r.matched_condition << ")\n";
    out << "Theta0 = " << fmt(theta0(params)) << "\n";
    return 0;
}

int cmd_simulate(const std::string& config_path, std::ostream& out) {
    RunConfig cfg = parse_config(config_path);
    TriMesh mesh = make_mesh(cfg);
    SimState init = initial_state(cfg, mesh);

    fs::create_directories(cfg.output_dir);
    fs::path dir(cfg.output_dir);
    std::ofstream diag(dir / "diagnostics.csv");
    if (!diag)
        throw std::runtime_error("simulate: cannot write " +
                                 (dir / "diagnostics.csv").string());

    SimResult res = run(mesh, cfg.params, init, cfg.dt, cfg.t_end,
                        cfg.blowup_threshold, cfg.steady, cfg.solver,
                        cfg.record_every, &diag);

    save_field_csv(mesh, res.final_state.u, (dir / "u_final.csv").string());
    if (!res.final_state.v.empty())
        save_field_csv(mesh, res.final_state.v,
                       (dir / "v_final.csv").string());
    if (!res.final_state.w.empty())
        save_field_csv(mesh, res.final_state.w,
                       (dir / "w_final.csv").string());

    out << "outcome = " << to_string(res.outcome) << "\n";
    out << "steps = " << res.final_state.step
        << ", final time = " << fmt(res.final_state.time) << "\n";
    out << "max_u = " << fmt(res.final_state.u.max()) << "\n";
    if (res.t_max_estimate)
        out << "T_max estimate = " << fmt(*res.t_max_estimate) << "\n";
    if (res.negativity_warnings > 0)
        out << "chemical negativity warnings = " << res.negativity_warnings
            << "\n";
    return res.outcome == Outcome::SolverFailure ? 1 : 0;
}

int cmd_sweep(const std::string& spec_path, std::ostream& out) {
    SweepSpec spec = parse_sweep(spec_path);
    fs::create_directories(spec.base.output_dir);
    fs::path csv_path = fs::path(spec.base.output_dir) / "sweep_results.csv";
    std::ofstream csv(csv_path);
    if (!csv)
        throw std::runtime_error("sweep: cannot write " + csv_path.string());
    int code = run_sweep(spec, default_parallelism((int)spec.rows.size()),
                         &csv, &out);
    out << "wrote " << csv_path.string() << "\n";
    return code;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
    CLI::App app{"P1 finite-element attraction-repulsion chemotaxis toolkit"};
    app.name("chemotax");
    app.require_subcommand(1);

    double mg_radius = 9.0;
    int mg_rings = 40;
    std::string mg_out;
    CLI::App* mesh_gen =
        app.add_subcommand("mesh-gen", "Generate a triangulated disk mesh");
    mesh_gen->add_option("--radius", mg_radius, "Disk radius");
    mesh_gen->add_option("--rings", mg_rings, "Number of concentric rings");
    mesh_gen->add_option("--out", mg_out, "Output mesh path")->required();

    ModelParams cp;
    cp.gamma1 = 0.0;  // sentinel: follow gamma0 unless set explicitly
    std::string cp_variant = "local";
    CLI::App* classify_cmd = app.add_subcommand(
        "classify", "Print the boundedness verdict for a parameter set");
    classify_cmd->add_option("--n", cp.n, "Space dimension");
    classify_cmd->add_option("--tau", cp.tau, "0 elliptic, 1 parabolic");
    classify_cmd->add_option("--variant", cp_variant, "local | nonlocal");
    classify_cmd->add_option("--k", cp.k, "f exponent");
    classify_cmd->add_option("--l", cp.l, "g exponent");
    classify_cmd->add_option("--chi", cp.chi, "attraction coefficient");
    classify_cmd->add_option("--xi", cp.xi, "repulsion coefficient");
    classify_cmd->add_option("--alpha", cp.alpha, "f coefficient");
    classify_cmd->add_option("--gamma0", cp.gamma0, "g coefficient");

    std::string sim_config;
    CLI::App* simulate =
        app.add_subcommand("simulate", "Run one configuration");
    simulate->add_option("config", sim_config, "Config file")->required();

    std::string sweep_spec;
    CLI::App* sweep =
        app.add_subcommand("sweep", "Run a parameter sweep specification");
    sweep->add_option("spec", sweep_spec, "Sweep spec file")->required();

    std::vector<const char*> argv;
    argv.push_back("chemotax");
    for (const std::string& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()),
                  const_cast<char**>(argv.data()));
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*mesh_gen) return cmd_mesh_gen(mg_radius, mg_rings, mg_out, out);
        if (*classify_cmd) {
            if (cp_variant == "local")
                cp.variant = Variant::local;
            else if (cp_variant == "nonlocal")
                cp.variant = Variant::nonlocal;
            else
                throw std::invalid_argument(
                    "variant: must be 'local' or 'nonlocal', got '" +
                    cp_variant + "'");
            if (cp.gamma1 <= 0.0) cp.gamma1 = cp.gamma0;
            return cmd_classify(cp, out);
        }
        if (*simulate) return cmd_simulate(sim_config, out);
        if (*sweep) return cmd_sweep(sweep_spec, out);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
    err << "error: no subcommand given\n";
    return 2;
}

}  // namespace chemotax
