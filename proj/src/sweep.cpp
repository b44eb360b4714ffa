#include "chemotax/sweep.hpp"

#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace chemotax {

namespace {

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::string fmt(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%g", x);
    return buf;
}

std::string preset_descriptor(const std::string& preset, double amp) {
    return preset + "(" + fmt(amp) + ")";
}

}  // namespace

SweepSpec parse_sweep(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("sweep: cannot open " + path);
    SweepSpec spec;
    std::string line;
    int line_no = 0;
    bool seen_row = false;
    while (std::getline(is, line)) {
        ++line_no;
        size_t hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.rfind("[row]", 0) == 0) {
            seen_row = true;
            SweepRow row;
            std::istringstream ts(line.substr(5));
            std::string token;
            while (ts >> token) {
                size_t eq = token.find('=');
                if (eq == std::string::npos)
                    throw std::invalid_argument(
                        "sweep: line " + std::to_string(line_no) +
                        ": expected key=value token, got '" + token + "'");
                std::string key = token.substr(0, eq);
                std::string value = token.substr(eq + 1);
                if (key == "label")
                    row.label = value;
                else
                    row.overrides.emplace_back(key, value);
            }
            if (row.label.empty())
                row.label = "row" + std::to_string(spec.rows.size() + 1);
            spec.rows.push_back(std::move(row));
        } else {
            if (seen_row)
                throw std::invalid_argument(
                    "sweep: line " + std::to_string(line_no) +
                    ": base settings must precede [row] lines");
            size_t eq = line.find('=');
            if (eq == std::string::npos)
                throw std::invalid_argument(
                    "sweep: line " + std::to_string(line_no) +
                    ": expected key = value, got '" + line + "'");
            std::string key = trim(line.substr(0, eq));
            std::string value = trim(line.substr(eq + 1));
            try {
                apply_config_entry(spec.base, key, value);
            } catch (const std::invalid_argument& e) {
                throw std::invalid_argument("sweep: line " +
                                            std::to_string(line_no) + ": " +
                                            e.what());
            }
        }
    }
    return spec;
}

int default_parallelism(int n_rows) {
    if (n_rows < 1) n_rows = 1;
    if (const char* env = std::getenv("CHEMOTAX_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0)
            return static_cast<int>(std::min<long>(v, n_rows));
    }
    unsigned hw = std::thread::hardware_concurrency();
    if (hw == 0) hw = 1;
    return std::max(1, std::min<int>(static_cast<int>(hw), n_rows));
}

namespace {

SweepRowResult run_row(const SweepSpec& spec, const SweepRow& row) {
    SweepRowResult res;
    res.label = row.label;
    res.config = spec.base;
    try {
        for (const auto& [key, value] : row.overrides)
            apply_config_entry(res.config, key, value);
        const RunConfig& cfg = res.config;
        validate(cfg.params);
        res.theta0_value = theta0(cfg.params);
        res.verdict = classify(cfg.params);

        TriMesh mesh = make_mesh(cfg);
        SimState init = initial_state(cfg, mesh);

        std::filesystem::create_directories(cfg.output_dir);
        std::filesystem::path diag_path =
            std::filesystem::path(cfg.output_dir) /
            ("diag_" + row.label + ".csv");
        std::ofstream diag(diag_path);
        if (!diag)
            throw std::runtime_error("sweep: cannot write " +
                                     diag_path.string());

        SimResult sim = run(mesh, cfg.params, init, cfg.dt, cfg.t_end,
                            cfg.blowup_threshold, cfg.steady, cfg.solver,
                            cfg.record_every, &diag);
        res.outcome = sim.outcome;
        res.t_max = sim.t_max_estimate;
        if (sim.outcome == Outcome::SolverFailure) {
            res.failed = true;
            res.diagnostic =
                "solver failed to converge at step " +
                std::to_string(sim.final_state.step);
        } else if (sim.outcome == Outcome::BlowUp &&
                   res.verdict.verdict == Verdict::BoundedGuaranteed) {
            res.failed = true;
            res.diagnostic =
                "CONSISTENCY VIOLATION: observed blow-up at t = " +
                fmt(sim.t_max_estimate.value_or(0.0)) +
                " on a configuration classified BoundedGuaranteed (" +
                res.verdict.matched_condition +
                "); a guaranteed-bounded run must never cross the "
                "threshold, so either the solver or the regime table is "
                "wrong here";
        }
    } catch (const std::exception& e) {
        res.failed = true;
        res.outcome = Outcome::SolverFailure;
        res.diagnostic = e.what();
    }
    return res;
}

}  // namespace

int run_sweep(const SweepSpec& spec, int parallelism, std::ostream* csv_out,
              std::ostream* log, std::vector<SweepRowResult>* results_out) {
    if (spec.rows.empty())
        throw std::invalid_argument("sweep: spec contains no rows");
    if (parallelism < 1) parallelism = 1;

    const int n_rows = static_cast<int>(spec.rows.size());
    std::vector<SweepRowResult> results(n_rows);
    std::atomic<int> next{0};
    std::mutex log_mutex;

    auto worker = [&]() {
        for (;;) {
            int i = next.fetch_add(1);
            if (i >= n_rows) return;
            if (log) {
                std::lock_guard<std::mutex> lk(log_mutex);
                *log << "[" << spec.rows[i].label << "] running\n";
            }
            results[i] = run_row(spec, spec.rows[i]);
            if (log) {
                const SweepRowResult& r = results[i];
                std::lock_guard<std::mutex> lk(log_mutex);
                *log << "[" << r.label << "] outcome=" << to_string(r.outcome);
                if (r.t_max) *log << " t_max=" << fmt(*r.t_max);
                *log << " verdict=" << to_string(r.verdict.verdict) << "\n";
                if (r.failed) *log << "[" << r.label << "] FAILED: "
                                   << r.diagnostic << "\n";
            }
        }
    };

    int n_threads = std::min(parallelism, n_rows);
    std::vector<std::thread> pool;
    pool.reserve(n_threads);
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    if (csv_out) {
        *csv_out << "label,tau,variant,u0,v0,w0,k,l,theta0,outcome,t_max,"
                    "verdict,condition,status\n";
        for (const SweepRowResult& r : results) {
            const RunConfig& c = r.config;
            std::string t_max_txt =
                r.failed ? "n/a" : (r.t_max ? fmt(*r.t_max) : "+inf");
            *csv_out << r.label << ',' << c.params.tau << ','
                     << (c.params.variant == Variant::local ? "local"
                                                            : "nonlocal")
                     << ',' << preset_descriptor(c.u0_preset, c.u0_amp) << ','
                     << preset_descriptor(c.v0_preset, c.v0_amp) << ','
                     << preset_descriptor(c.w0_preset, c.w0_amp) << ','
                     << fmt(c.params.k) << ',' << fmt(c.params.l) << ','
                     << fmt(r.theta0_value) << ',' << to_string(r.outcome)
                     << ',' << t_max_txt << ','
                     << to_string(r.verdict.verdict) << ",\""
                     << r.verdict.matched_condition << "\","
                     << (r.failed ? "FAILED" : "ok") << '\n';
        }
    }

    if (results_out) *results_out = results;

    for (const SweepRowResult& r : results)
        if (r.failed) return 1;
    return 0;
}

}  // namespace chemotax
