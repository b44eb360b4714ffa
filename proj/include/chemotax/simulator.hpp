#pragma once

#include <optional>
#include <ostream>
#include <vector>

#include "chemotax/fem.hpp"
#include "chemotax/mesh.hpp"
#include "chemotax/sparse.hpp"
#include "chemotax/theory.hpp"

namespace chemotax {

struct SimState {
    long step = 0;
    double time = 0.0;  // step * dt
    Field u, v, w;
};

struct DiagnosticsRow {
    long step = 0;
    double time = 0.0;
    double max_u = 0.0, min_u = 0.0, mass = 0.0;
    double max_v = 0.0, max_w = 0.0;
    int it_v = 0, it_w = 0, it_u = 0;  // solver iterations behind this state
};

enum class Outcome { BlowUp, SteadyState, ReachedTEnd, SolverFailure };

const char* to_string(Outcome o);

struct SimResult {
    Outcome outcome = Outcome::ReachedTEnd;
    std::optional<double> t_max_estimate;  // first threshold-crossing time
    std::vector<DiagnosticsRow> rows;
    SimState final_state;
    int negativity_warnings = 0;  // chemical undershoot events (non-fatal)
};

struct SteadyCfg {
    double rate_tol = 1e-3;
    int consecutive = 100;
    double floor = 1e-30;
};

struct SolverCfg {
    double chem_tol = 1e-10;
    double transport_tol = 1e-8;
    int max_iter_factor = 10;  // max_iter = factor * n_vertices
};

// Tracks ||u_j - u_{j-1}||_inf / (dt * max(||u_j||_inf, floor)) < rate_tol
// over consecutive steps; update() returns true when the streak reaches
// cfg.consecutive.
struct SteadyTracker {
    int streak = 0;
    bool update(const Field& u_prev, const Field& u_curr, double dt,
                const SteadyCfg& cfg);
};

// Chemical solves. Reports (iterations, residual) land in *rep when given;
// non-convergence throws SolverFailureError from the run loop's wrappers
// but these low-level calls just report.

// (K + coeff*M) v = M*source. max_iter <= 0 means max(1000, 10*n).
Field chem_solve_elliptic(const SparseMatrix& K, const SparseMatrix& M,
                          double coeff, const Field& source, double tol,
                          SolveReport* rep = nullptr,
                          const Field* warm_start = nullptr,
                          int max_iter = 0);

// (M + dt*K + dt*coeff*M) v_next = M*prev + dt*M*source
Field chem_step_parabolic(const SparseMatrix& K, const SparseMatrix& M,
                          double coeff, const Field& prev, const Field& source,
                          double dt, double tol, SolveReport* rep = nullptr,
                          int max_iter = 0);

// Zero-mean Neumann solve of K v = M*source - mean projection; delegates to
// zero_mean_solve.
Field chem_solve_nonlocal(const SparseMatrix& K, const SparseMatrix& M,
                          const Field& source, double tol,
                          SolveReport* rep = nullptr);

// Semi-implicit transport update:
// (M + dt*K - dt*chi*C(v) + dt*xi*C(w)) u_next = M*u_prev.
// Gradients of v, w are frozen over the step; the matrix has unit column
// sums times M, so discrete mass is conserved to solver tolerance.
Field cell_step(const Assembler& assembler, const SparseMatrix& K,
                const SparseMatrix& M, const Field& u_prev, const Field& v,
                const Field& w, const ModelParams& params, double dt,
                double tol, SolveReport* rep = nullptr, int max_iter = 0);

// Full time loop. For tau=0 and nonlocal runs only initial.u is consulted
// (v, w are computed from u each step); tau=1 requires initial v and w.
// Terminates on threshold crossing (BlowUp), steady state, t >= t_end, or
// solver failure. A row is recorded every record_every steps plus always at
// step 0 and at termination. When diag_stream is given, rows stream to it
// in the diagnostics CSV format as they are produced.
SimResult run(const TriMesh& mesh, const ModelParams& params,
              const SimState& initial, double dt, double t_end,
              double blowup_threshold, const SteadyCfg& steady = {},
              const SolverCfg& solver = {}, int record_every = 10,
              std::ostream* diag_stream = nullptr);

void write_diagnostics_header(std::ostream& os);
void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& row);

}  // namespace chemotax
