#include "chemotax/simulator.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace chemotax {

const char* to_string(Outcome o) {
    switch (o) {
        case Outcome::BlowUp: return "BlowUp";
        case Outcome::SteadyState: return "SteadyState";
        case Outcome::ReachedTEnd: return "ReachedTEnd";
        case Outcome::SolverFailure: return "SolverFailure";
    }
    return "?";
}

bool SteadyTracker::update(const Field& u_prev, const Field& u_curr, double dt,
                           const SteadyCfg& cfg) {
    double diff = 0.0;
    for (size_t i = 0; i < u_curr.values.size(); ++i)
        diff = std::max(diff,
                        std::abs(u_curr.values[i] - u_prev.values[i]));
    double scale = std::max(norm_inf(u_curr.values), cfg.floor);
    double rate = diff / (dt * scale);
    if (rate < cfg.rate_tol)
        ++streak;
    else
        streak = 0;
    return streak >= cfg.consecutive;
}

namespace {

Field wrap(std::vector<double> values, std::uint64_t mesh_id) {
    Field f;
    f.values = std::move(values);
    f.mesh_id = mesh_id;
    return f;
}

std::vector<double> combine(const SparseMatrix& M, const SparseMatrix& K,
                            double m_coeff, double k_coeff) {
    std::vector<double> vals(M.vals.size());
    for (size_t p = 0; p < vals.size(); ++p)
        vals[p] = m_coeff * M.vals[p] + k_coeff * K.vals[p];
    return vals;
}

int default_max_iter(int n) { return std::max(1000, 10 * n); }

}  // namespace

Field chem_solve_elliptic(const SparseMatrix& K, const SparseMatrix& M,
                          double coeff, const Field& source, double tol,
                          SolveReport* rep, const Field* warm_start,
                          int max_iter) {
    if (source.size() != K.n)
        throw std::invalid_argument("chem_solve_elliptic: size mismatch");
    SparseMatrix A;
    A.n = K.n;
    A.row_ptr = K.row_ptr;
    A.col_idx = K.col_idx;
    A.vals = combine(M, K, coeff, 1.0);
    std::vector<double> rhs = M.multiply(source.values);
    std::vector<double> x0 =
        warm_start && warm_start->size() == K.n
            ? warm_start->values
            : std::vector<double>(K.n, 0.0);
    auto [x, r] = cg_solve(
        A, rhs, tol, max_iter > 0 ? max_iter : default_max_iter(K.n), x0);
    if (rep) *rep = r;
    return wrap(std::move(x), source.mesh_id);
}

Field chem_step_parabolic(const SparseMatrix& K, const SparseMatrix& M,
                          double coeff, const Field& prev, const Field& source,
                          double dt, double tol, SolveReport* rep,
                          int max_iter) {
    if (prev.size() != K.n || source.size() != K.n)
        throw std::invalid_argument("chem_step_parabolic: size mismatch");
    SparseMatrix A;
    A.n = K.n;
    A.row_ptr = K.row_ptr;
    A.col_idx = K.col_idx;
    A.vals = combine(M, K, 1.0 + dt * coeff, dt);
    std::vector<double> load(K.n);
    for (int i = 0; i < K.n; ++i)
        load[i] = prev.values[i] + dt * source.values[i];
    std::vector<double> rhs = M.multiply(load);
    auto [x, r] = cg_solve(
        A, rhs, tol, max_iter > 0 ? max_iter : default_max_iter(K.n),
        prev.values);
    if (rep) *rep = r;
    return wrap(std::move(x), prev.mesh_id);
}

Field chem_solve_nonlocal(const SparseMatrix& K, const SparseMatrix& M,
                          const Field& source, double tol, SolveReport* rep) {
    if (source.size() != K.n)
        throw std::invalid_argument("chem_solve_nonlocal: size mismatch");
    std::vector<double> rhs = M.multiply(source.values);
    auto [x, r] = zero_mean_solve(K, M, rhs, tol);
    if (rep) *rep = r;
    return wrap(std::move(x), source.mesh_id);
}

Field cell_step(const Assembler& assembler, const SparseMatrix& K,
                const SparseMatrix& M, const Field& u_prev, const Field& v,
                const Field& w, const ModelParams& params, double dt,
                double tol, SolveReport* rep, int max_iter) {
    const std::uint64_t id = assembler.mesh().id;
    if (u_prev.mesh_id != id || v.mesh_id != id || w.mesh_id != id)
        throw std::invalid_argument("cell_step: field/mesh mismatch");
    SparseMatrix Cv = assembler.convection(v);
    SparseMatrix Cw = assembler.convection(w);
    SparseMatrix A;
    A.n = K.n;
    A.row_ptr = K.row_ptr;
    A.col_idx = K.col_idx;
    A.vals.resize(K.vals.size());
    for (size_t p = 0; p < A.vals.size(); ++p)
        A.vals[p] = M.vals[p] + dt * (K.vals[p] - params.chi * Cv.vals[p] +
                                      params.xi * Cw.vals[p]);
    std::vector<double> rhs = M.multiply(u_prev.values);
    auto [x, r] = bicgstab_solve(
        A, rhs, tol, max_iter > 0 ? max_iter : default_max_iter(K.n),
        u_prev.values);
    // The transport matrix has the column sums of M (those of K and the
    // convection blocks vanish), so discrete mass is conserved exactly by
    // the scheme; distribute the solver's residual mass slip uniformly to
    // keep the invariant at rounding level over long runs.
    double slip = kahan_sum(rhs) - kahan_sum(M.multiply(x));
    double total_mass_of_ones = kahan_sum(M.vals);
    if (total_mass_of_ones > 0.0) {
        double c = slip / total_mass_of_ones;
        for (double& xi : x) xi += c;
    }
    if (rep) *rep = r;
    return wrap(std::move(x), id);
}

void write_diagnostics_header(std::ostream& os) {
    os << "step,time,max_u,min_u,mass,max_v,max_w,it_v,it_w,it_u\n";
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRow& row) {
    char buf[256];
    std::snprintf(buf, sizeof buf,
                  "%ld,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%d,%d,%d\n",
                  row.step, row.time, row.max_u, row.min_u, row.mass,
                  row.max_v, row.max_w, row.it_v, row.it_w, row.it_u);
    os << buf;
}

SimResult run(const TriMesh& mesh, const ModelParams& params,
              const SimState& initial, double dt, double t_end,
              double blowup_threshold, const SteadyCfg& steady,
              const SolverCfg& solver, int record_every,
              std::ostream* diag_stream) {
    validate(params);
    if (!(dt > 0.0)) throw std::invalid_argument("run: dt must be > 0");
    if (!(t_end > 0.0)) throw std::invalid_argument("run: t_end must be > 0");
    if (!(blowup_threshold > 0.0))
        throw std::invalid_argument("run: blowup_threshold must be > 0");
    if (record_every < 1)
        throw std::invalid_argument("run: record_every must be >= 1");
    if (!(solver.chem_tol > 0.0) || !(solver.transport_tol > 0.0) ||
        solver.max_iter_factor < 1)
        throw std::invalid_argument("run: invalid solver settings");
    if (initial.u.empty() || initial.u.mesh_id != mesh.id)
        throw std::invalid_argument(
            "run: initial.u must be a field on the given mesh");
    if (params.tau == 1 &&
        (initial.v.empty() || initial.v.mesh_id != mesh.id ||
         initial.w.empty() || initial.w.mesh_id != mesh.id))
        throw std::invalid_argument(
            "run: tau = 1 requires initial v and w on the given mesh");

    Assembler assembler(mesh);
    SparseMatrix K = assembler.stiffness();
    SparseMatrix M = assembler.mass();
    const int max_iter = solver.max_iter_factor * K.n;

    const long n_steps =
        std::max<long>(1, static_cast<long>(std::ceil(t_end / dt - 1e-12)));

    SimResult result;
    Field u = initial.u;
    Field v = params.tau == 1 ? initial.v : Field{};
    Field w = params.tau == 1 ? initial.w : Field{};
    SteadyTracker tracker;
    bool steady_fired = false;
    int it_u_last = 0;

    if (diag_stream) write_diagnostics_header(*diag_stream);

    auto finalize = [&](Outcome outcome, long j) {
        result.outcome = outcome;
        result.final_state.step = j;
        result.final_state.time = j * dt;
        result.final_state.u = std::move(u);
        result.final_state.v = std::move(v);
        result.final_state.w = std::move(w);
        return std::move(result);
    };

    for (long j = 0;; ++j) {
        SolveReport rep_v, rep_w;
        if (params.variant == Variant::nonlocal) {
            Field fu = apply_production(u, ProductionLaw::f_alpha_k,
                                        params.alpha, params.k);
            Field gu = apply_production(u, ProductionLaw::g_gamma_l,
                                        params.gamma0, params.l);
            v = chem_solve_nonlocal(K, M, fu, solver.chem_tol, &rep_v);
            w = chem_solve_nonlocal(K, M, gu, solver.chem_tol, &rep_w);
        } else if (params.tau == 0) {
            Field fu = apply_production(u, ProductionLaw::f_alpha_k,
                                        params.alpha, params.k);
            Field gu = apply_production(u, ProductionLaw::g_gamma_l,
                                        params.gamma0, params.l);
            Field* warm_v = v.empty() ? nullptr : &v;
            Field* warm_w = w.empty() ? nullptr : &w;
            v = chem_solve_elliptic(K, M, params.beta, fu, solver.chem_tol,
                                    &rep_v, warm_v, max_iter);
            w = chem_solve_elliptic(K, M, params.delta, gu, solver.chem_tol,
                                    &rep_w, warm_w, max_iter);
        } else {
            Field fu = apply_production(u, ProductionLaw::f_alpha_k,
                                        params.alpha, params.k);
            Field gu = apply_production(u, ProductionLaw::g_gamma_l,
                                        params.gamma0, params.l);
            v = chem_step_parabolic(K, M, params.beta, v, fu, dt,
                                    solver.chem_tol, &rep_v, max_iter);
            w = chem_step_parabolic(K, M, params.delta, w, gu, dt,
                                    solver.chem_tol, &rep_w, max_iter);
        }
        if (!rep_v.converged || !rep_w.converged)
            return finalize(Outcome::SolverFailure, j);
        if (v.min() < -1e-8 * std::abs(v.max())) ++result.negativity_warnings;
        if (w.min() < -1e-8 * std::abs(w.max())) ++result.negativity_warnings;

        const double max_u = u.max();
        const bool blow = max_u >= blowup_threshold;
        const bool last = j == n_steps;
        if (j % record_every == 0 || blow || steady_fired || last) {
            DiagnosticsRow row;
            row.step = j;
            row.time = j * dt;
            row.max_u = max_u;
            row.min_u = u.min();
            row.mass = integrate(mesh, u);
            row.max_v = v.max();
            row.max_w = w.max();
            row.it_v = rep_v.iterations;
            row.it_w = rep_w.iterations;
            row.it_u = it_u_last;
            result.rows.push_back(row);
            if (diag_stream) write_diagnostics_row(*diag_stream, row);
        }
        if (blow) {
            result.t_max_estimate = j * dt;
            return finalize(Outcome::BlowUp, j);
        }
        if (steady_fired) return finalize(Outcome::SteadyState, j);
        if (last) return finalize(Outcome::ReachedTEnd, j);

        SolveReport rep_u;
        Field u_next = cell_step(assembler, K, M, u, v, w, params, dt,
                                 solver.transport_tol, &rep_u, max_iter);
        if (!rep_u.converged) return finalize(Outcome::SolverFailure, j);
        it_u_last = rep_u.iterations;
        steady_fired = tracker.update(u, u_next, dt, steady);
        u = std::move(u_next);
    }
}

}  // namespace chemotax
