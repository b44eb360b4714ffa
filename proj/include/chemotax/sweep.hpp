#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "chemotax/config.hpp"

namespace chemotax {

// One sweep row: named overrides applied on top of the base config.
struct SweepRow {
    std::string label;
    std::vector<std::pair<std::string, std::string>> overrides;
};

// Sweep file format: key=value lines before the first `[row]` line adjust
// the base config; each `[row]` line carries space-separated key=value
// tokens (an optional `label=...` names the row).
struct SweepSpec {
    RunConfig base;
    std::vector<SweepRow> rows;
};

SweepSpec parse_sweep(const std::string& path);

struct SweepRowResult {
    std::string label;
    RunConfig config;
    Outcome outcome = Outcome::SolverFailure;
    std::optional<double> t_max;
    RegimeVerdict verdict;
    double theta0_value = 0.0;
    bool failed = false;       // solver failure or consistency contradiction
    std::string diagnostic;    // human-readable failure cause
};

// Runs every row (up to `parallelism` concurrently), emits the report CSV
// to csv_out and progress/diagnostics to log (either may be null). A row
// observing BlowUp under a BoundedGuaranteed verdict is a contradiction:
// the row is recorded as failed with a loud diagnostic and the sweep
// return value reflects it. Returns 0 when all rows succeeded, 1
// otherwise. Throws std::invalid_argument on an empty spec.
int run_sweep(const SweepSpec& spec, int parallelism, std::ostream* csv_out,
              std::ostream* log,
              std::vector<SweepRowResult>* results_out = nullptr);

// Parallelism cap from the environment (CHEMOTAX_THREADS), falling back to
// hardware concurrency.
int default_parallelism(int n_rows);

}  // namespace chemotax
