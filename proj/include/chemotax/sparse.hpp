#pragma once

#include <utility>
#include <vector>

namespace chemotax {

// Square CSR matrix; column indices strictly increasing within each row.
struct SparseMatrix {
    int n = 0;
    std::vector<int> row_ptr;    // size n+1
    std::vector<int> col_idx;    // size nnz
    std::vector<double> vals;    // size nnz

    long nnz() const { return static_cast<long>(col_idx.size()); }
    void multiply(const double* x, double* y) const;  // y = A x
    std::vector<double> multiply(const std::vector<double>& x) const;
    // True when rows/cols layout is identical (values may differ).
    bool same_pattern(const SparseMatrix& other) const;
};

struct Triplet {
    int row, col;
    double val;
};

// Duplicate (row,col) entries are summed.
SparseMatrix from_triplets(int n, std::vector<Triplet> entries);

struct SolveReport {
    int iterations = 0;
    double final_residual = 0.0;  // ||b - A x||_2 / ||b||_2, recomputed at exit
    bool converged = false;
};

// Jacobi-preconditioned conjugate gradients for symmetric positive
// (semi)definite systems. Breakdown or max_iter exhaustion yields a
// non-converged report; the caller decides.
std::pair<std::vector<double>, SolveReport> cg_solve(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    int max_iter, const std::vector<double>& x0);

// Jacobi-preconditioned BiCGSTAB for general square systems.
std::pair<std::vector<double>, SolveReport> bicgstab_solve(
    const SparseMatrix& A, const std::vector<double>& b, double tol,
    int max_iter, const std::vector<double>& x0);

// Singular Neumann solve: K x = rhs - (1^T rhs / 1^T M 1) * M 1 by CG, then
// x is shifted so 1^T M x = 0. rhs is expected to be M*s for a nodal source.
std::pair<std::vector<double>, SolveReport> zero_mean_solve(
    const SparseMatrix& K, const SparseMatrix& M,
    const std::vector<double>& rhs, double tol);

// Vector kernels shared by solvers and diagnostics.
double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);
double norm_inf(const std::vector<double>& v);
double kahan_sum(const std::vector<double>& v);

}  // namespace chemotax
