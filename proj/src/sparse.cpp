#include "chemotax/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace chemotax {

void SparseMatrix::multiply(const double* x, double* y) const {
    for (int i = 0; i < n; ++i) {
        double acc = 0.0;
        for (int p = row_ptr[i]; p < row_ptr[i + 1]; ++p)
            acc += vals[p] * x[col_idx[p]];
        y[i] = acc;
    }
}

std::vector<double> SparseMatrix::multiply(
    const std::vector<double>& x) const {
    std::vector<double> y(n);
    multiply(x.data(), y.data());
    return y;
}

bool SparseMatrix::same_pattern(const SparseMatrix& other) const {
    return n == other.n && row_ptr == other.row_ptr &&
           col_idx == other.col_idx;
}

SparseMatrix from_triplets(int n, std::vector<Triplet> entries) {
    for (const auto& t : entries)
        if (t.row < 0 || t.row >= n || t.col < 0 || t.col >= n)
            throw std::invalid_argument("from_triplets: index out of range");
    std::sort(entries.begin(), entries.end(),
              [](const Triplet& a, const Triplet& b) {
                  return a.row != b.row ? a.row < b.row : a.col < b.col;
              });
    SparseMatrix A;
    A.n = n;
    A.row_ptr.assign(n + 1, 0);
    for (size_t i = 0; i < entries.size();) {
        size_t j = i;
        double sum = 0.0;
        while (j < entries.size() && entries[j].row == entries[i].row &&
               entries[j].col == entries[i].col)
            sum += entries[j++].val;
        A.col_idx.push_back(entries[i].col);
        A.vals.push_back(sum);
        ++A.row_ptr[entries[i].row + 1];
        i = j;
    }
    for (int i = 0; i < n; ++i) A.row_ptr[i + 1] += A.row_ptr[i];
    return A;
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(const std::vector<double>& v) { return std::sqrt(dot(v, v)); }

double norm_inf(const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double kahan_sum(const std::vector<double>& v) {
    double sum = 0.0, comp = 0.0;
    for (double x : v) {
        double y = x - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

namespace {

std::vector<double> inverse_diagonal(const SparseMatrix& A) {
    std::vector<double> inv(A.n, 1.0);
    for (int i = 0; i < A.n; ++i)
        for (int p = A.row_ptr[i]; p < A.row_ptr[i + 1]; ++p)
            if (A.col_idx[p] == i && A.vals[p] != 0.0)
                inv[i] = 1.0 / A.vals[p];
    return inv;
}

std::vector<double> residual_of(const SparseMatrix& A,
                                const std::vector<double>& x,
                                const std::vector<double>& b) {
    std::vector<double> r = A.multiply(x);
    for (int i = 0; i < A.n; ++i) r[i] = b[i] - r[i];
    return r;
}

}  // namespace

std::pair<std::vector<double>, SolveReport> cg_solve(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    int max_iter, const std::vector<double>& x0) {
    if (tol <= 0.0) throw std::invalid_argument("cg_solve: tol must be > 0");
    if (static_cast<int>(b.size()) != A.n ||
        static_cast<int>(x0.size()) != A.n)
        throw std::invalid_argument("cg_solve: size mismatch");

    const int n = A.n;
    std::vector<double> x = x0;
    SolveReport rep;
    double bnorm = norm2(b);
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        rep.converged = true;
        return {std::move(x), rep};
    }

    std::vector<double> inv_diag = inverse_diagonal(A);
    std::vector<double> r = residual_of(A, x, b);
    std::vector<double> z(n), p(n), Ap(n);
    for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
    p = z;
    double rz = dot(r, z);

    auto finish = [&](bool ok, int it) {
        std::vector<double> tr = residual_of(A, x, b);
        rep.final_residual = norm2(tr) / bnorm;
        rep.converged = ok && rep.final_residual <= tol;
        rep.iterations = it;
        return std::pair<std::vector<double>, SolveReport>{x, rep};
    };

    if (norm2(r) <= tol * bnorm) return finish(true, 0);

    for (int it = 1; it <= max_iter; ++it) {
        A.multiply(p.data(), Ap.data());
        double pAp = dot(p, Ap);
        if (!(pAp > 0.0) || !std::isfinite(pAp)) return finish(false, it);
        double alpha = rz / pAp;
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * p[i];
            r[i] -= alpha * Ap[i];
        }
        if (norm2(r) <= tol * bnorm) {
            std::vector<double> tr = residual_of(A, x, b);
            double tnorm = norm2(tr);
            if (tnorm <= tol * bnorm) {
                rep.final_residual = tnorm / bnorm;
                rep.converged = true;
                rep.iterations = it;
                return {std::move(x), rep};
            }
            r = std::move(tr);  // drifted recurrence: restart from the truth
            for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
            p = z;
            rz = dot(r, z);
            continue;
        }
        for (int i = 0; i < n; ++i) z[i] = inv_diag[i] * r[i];
        double rz_new = dot(r, z);
        if (rz == 0.0 || !std::isfinite(rz_new)) return finish(false, it);
        double beta = rz_new / rz;
        rz = rz_new;
        for (int i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    return finish(false, max_iter);
}

std::pair<std::vector<double>, SolveReport> bicgstab_solve(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    int max_iter, const std::vector<double>& x0) {
    if (tol <= 0.0)
        throw std::invalid_argument("bicgstab_solve: tol must be > 0");
    if (static_cast<int>(b.size()) != A.n ||
        static_cast<int>(x0.size()) != A.n)
        throw std::invalid_argument("bicgstab_solve: size mismatch");

    const int n = A.n;
    std::vector<double> x = x0;
    SolveReport rep;
    double bnorm = norm2(b);
    if (bnorm == 0.0) {
        x.assign(n, 0.0);
        rep.converged = true;
        return {std::move(x), rep};
    }

    std::vector<double> inv_diag = inverse_diagonal(A);
    std::vector<double> r = residual_of(A, x, b);
    std::vector<double> r0hat = r;
    std::vector<double> p(n, 0.0), v(n, 0.0), phat(n), s(n), shat(n), t(n);
    double rho = 1.0, alpha = 1.0, omega = 1.0;

    auto finish = [&](bool ok, int it) {
        std::vector<double> tr = residual_of(A, x, b);
        rep.final_residual = norm2(tr) / bnorm;
        rep.converged = ok && rep.final_residual <= tol;
        rep.iterations = it;
        return std::pair<std::vector<double>, SolveReport>{x, rep};
    };

    if (norm2(r) <= tol * bnorm) return finish(true, 0);

    for (int it = 1; it <= max_iter; ++it) {
        double rho_new = dot(r0hat, r);
        if (rho_new == 0.0 || !std::isfinite(rho_new))
            return finish(false, it);
        if (it == 1) {
            p = r;
        } else {
            double beta = (rho_new / rho) * (alpha / omega);
            if (!std::isfinite(beta)) return finish(false, it);
            for (int i = 0; i < n; ++i)
                p[i] = r[i] + beta * (p[i] - omega * v[i]);
        }
        rho = rho_new;
        for (int i = 0; i < n; ++i) phat[i] = inv_diag[i] * p[i];
        A.multiply(phat.data(), v.data());
        double denom = dot(r0hat, v);
        if (denom == 0.0 || !std::isfinite(denom)) return finish(false, it);
        alpha = rho / denom;
        for (int i = 0; i < n; ++i) s[i] = r[i] - alpha * v[i];
        if (norm2(s) <= tol * bnorm) {
            std::vector<double> xh = x;
            for (int i = 0; i < n; ++i) xh[i] += alpha * phat[i];
            std::vector<double> tr = residual_of(A, xh, b);
            double tnorm = norm2(tr);
            if (tnorm <= tol * bnorm) {
                x = std::move(xh);
                rep.final_residual = tnorm / bnorm;
                rep.converged = true;
                rep.iterations = it;
                return {std::move(x), rep};
            }
        }
        for (int i = 0; i < n; ++i) shat[i] = inv_diag[i] * s[i];
        A.multiply(shat.data(), t.data());
        double tt = dot(t, t);
        if (tt == 0.0 || !std::isfinite(tt)) return finish(false, it);
        omega = dot(t, s) / tt;
        if (omega == 0.0 || !std::isfinite(omega)) return finish(false, it);
        for (int i = 0; i < n; ++i) {
            x[i] += alpha * phat[i] + omega * shat[i];
            r[i] = s[i] - omega * t[i];
        }
        if (norm2(r) <= tol * bnorm) {
            std::vector<double> tr = residual_of(A, x, b);
            double tnorm = norm2(tr);
            if (tnorm <= tol * bnorm) {
                rep.final_residual = tnorm / bnorm;
                rep.converged = true;
                rep.iterations = it;
                return {std::move(x), rep};
            }
        }
    }
    return finish(false, max_iter);
}

std::pair<std::vector<double>, SolveReport> zero_mean_solve(
    const SparseMatrix& K, const SparseMatrix& M,
    const std::vector<double>& rhs, double tol) {
    if (K.n != M.n || static_cast<int>(rhs.size()) != K.n)
        throw std::invalid_argument("zero_mean_solve: size mismatch");
    const int n = K.n;
    std::vector<double> ones(n, 1.0);
    std::vector<double> M1 = M.multiply(ones);
    double sum_M1 = kahan_sum(M1);
    if (!(sum_M1 > 0.0))
        throw std::invalid_argument("zero_mean_solve: M has no positive mass");

    std::vector<double> proj = rhs;
    double mean = kahan_sum(rhs) / sum_M1;
    for (int i = 0; i < n; ++i) proj[i] -= mean * M1[i];

    // A constant source projects to rounding noise; the solution is the
    // zero field and CG on pure noise would stall against the null space.
    if (norm2(proj) <= 1e-13 * norm2(rhs)) {
        SolveReport rep;
        rep.iterations = 0;
        rep.final_residual = 0.0;
        rep.converged = true;
        return {std::vector<double>(n, 0.0), rep};
    }

    auto [x, rep] =
        cg_solve(K, proj, tol, std::max(1000, 20 * n), std::vector<double>(n, 0.0));

    std::vector<double> Mx = M.multiply(x);
    double shift = kahan_sum(Mx) / sum_M1;
    for (double& xi : x) xi -= shift;

    std::vector<double> res = K.multiply(x);
    for (int i = 0; i < n; ++i) res[i] = proj[i] - res[i];
    double pnorm = norm2(proj);
    rep.final_residual = pnorm > 0.0 ? norm2(res) / pnorm : 0.0;
    rep.converged = rep.final_residual <= tol || pnorm == 0.0;
    return {std::move(x), rep};
}

}  // namespace chemotax
