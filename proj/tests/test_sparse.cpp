#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "chemotax/fem.hpp"
#include "chemotax/mesh.hpp"
#include "chemotax/sparse.hpp"

using namespace chemotax;

namespace {

// Deterministic SPD test matrix: diagonally dominant with random couplings.
SparseMatrix random_spd(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> off(-1.0, 1.0);
    std::vector<Triplet> trip;
    std::vector<double> diag(n, 0.0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if ((rng() & 7u) == 0u) {
                double v = off(rng);
                trip.push_back({i, j, v});
                trip.push_back({j, i, v});
                diag[i] += std::abs(v);
                diag[j] += std::abs(v);
            }
    for (int i = 0; i < n; ++i) trip.push_back({i, i, diag[i] + 1.0});
    return from_triplets(n, std::move(trip));
}

std::vector<double> random_vec(int n, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    std::vector<double> v(n);
    for (auto& x : v) x = d(rng);
    return v;
}

double relative_residual(const SparseMatrix& A, const std::vector<double>& x,
                         const std::vector<double>& b) {
    std::vector<double> Ax = A.multiply(x);
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < b.size(); ++i) {
        num += (b[i] - Ax[i]) * (b[i] - Ax[i]);
        den += b[i] * b[i];
    }
    return std::sqrt(num) / std::sqrt(den);
}

}  // namespace

TEST_CASE("CSR from triplets sums duplicates and sorts columns") {
    SparseMatrix A = from_triplets(
        3, {{0, 2, 1.0}, {0, 0, 2.0}, {0, 2, 0.5}, {2, 1, -1.0}});
    CHECK(A.row_ptr == std::vector<int>({0, 2, 2, 3}));
    CHECK(A.col_idx == std::vector<int>({0, 2, 1}));
    CHECK(A.vals[0] == 2.0);
    CHECK(A.vals[1] == 1.5);
    CHECK(A.vals[2] == -1.0);
}

TEST_CASE("matrix-vector product") {
    SparseMatrix A =
        from_triplets(2, {{0, 0, 2.0}, {0, 1, 1.0}, {1, 1, -3.0}});
    auto y = A.multiply({1.0, 2.0});
    CHECK(y[0] == 4.0);
    CHECK(y[1] == -6.0);
}

TEST_CASE("CG solves a diagonal system in one preconditioned step") {
    SparseMatrix D =
        from_triplets(4, {{0, 0, 2.0}, {1, 1, 4.0}, {2, 2, 8.0}, {3, 3, 1.0}});
    std::vector<double> b = {2.0, 8.0, 4.0, -3.0};
    auto [x, rep] = cg_solve(D, b, 1e-14, 100, std::vector<double>(4, 0.0));
    CHECK(rep.converged);
    CHECK(rep.iterations <= 1);
    CHECK(x[0] == doctest::Approx(1.0));
    CHECK(x[1] == doctest::Approx(2.0));
    CHECK(x[2] == doctest::Approx(0.5));
    CHECK(x[3] == doctest::Approx(-3.0));
}

TEST_CASE("CG residual verified by fresh recomputation") {
    SparseMatrix A = random_spd(50, 11);
    std::vector<double> b = random_vec(50, 12);
    auto [x, rep] = cg_solve(A, b, 1e-12, 500, std::vector<double>(50, 0.0));
    CHECK(rep.converged);
    CHECK(relative_residual(A, x, b) <= 1e-12);
    CHECK(rep.final_residual <= 1e-12);
}

TEST_CASE("CG converges within 3n iterations on SPD systems") {
    for (unsigned seed : {1u, 2u, 3u}) {
        int n = 80;
        SparseMatrix A = random_spd(n, seed);
        std::vector<double> b = random_vec(n, seed + 100);
        auto [x, rep] =
            cg_solve(A, b, 1e-10, 3 * n, std::vector<double>(n, 0.0));
        CHECK(rep.converged);
        CHECK(rep.iterations <= 3 * n);
    }
}

TEST_CASE("elliptic chemical system has the constant solution") {
    TriMesh m = generate_disk_mesh(9.0, 8);
    SparseMatrix K = assemble_stiffness(m);
    SparseMatrix M = assemble_mass(m);
    const double beta = 1.7, c = 3.0;
    // A = K + beta M
    SparseMatrix A = K;
    REQUIRE(A.same_pattern(M));
    for (size_t p = 0; p < A.vals.size(); ++p) A.vals[p] += beta * M.vals[p];
    std::vector<double> rhs = M.multiply(std::vector<double>(A.n, c));
    auto [x, rep] =
        cg_solve(A, rhs, 1e-12, 10 * A.n, std::vector<double>(A.n, 0.0));
    CHECK(rep.converged);
    for (double v : x) CHECK(v == doctest::Approx(c / beta).epsilon(1e-8));
}

TEST_CASE("BiCGSTAB agrees with CG on SPD systems") {
    SparseMatrix A = random_spd(60, 77);
    std::vector<double> b = random_vec(60, 78);
    auto [xc, rc] = cg_solve(A, b, 1e-13, 600, std::vector<double>(60, 0.0));
    auto [xb, rb] =
        bicgstab_solve(A, b, 1e-13, 600, std::vector<double>(60, 0.0));
    REQUIRE(rc.converged);
    REQUIRE(rb.converged);
    for (int i = 0; i < 60; ++i)
        CHECK(std::abs(xc[i] - xb[i]) <= 1e-10 * (1.0 + std::abs(xc[i])));
}

TEST_CASE("BiCGSTAB handles a zero row without crashing") {
    SparseMatrix A =
        from_triplets(3, {{0, 0, 1.0}, {2, 2, 1.0}});  // row 1 empty
    std::vector<double> b = {1.0, 1.0, 1.0};
    auto [x, rep] = bicgstab_solve(A, b, 1e-10, 50, std::vector<double>(3, 0.0));
    CHECK_FALSE(rep.converged);
}

TEST_CASE("BiCGSTAB converges on a nonsymmetric transport-like system") {
    TriMesh m = generate_disk_mesh(9.0, 10);
    SparseMatrix K = assemble_stiffness(m);
    SparseMatrix M = assemble_mass(m);
    Field v = interpolate(m, [](double x, double y) {
        return std::exp(-(x * x + y * y) / 4.0);
    });
    SparseMatrix C = assemble_convection(m, v);
    const double dt = 1e-3, chi = 1.0;
    SparseMatrix A = M;
    for (size_t p = 0; p < A.vals.size(); ++p)
        A.vals[p] += dt * K.vals[p] - dt * chi * C.vals[p];
    Field u0 = interpolate(m, [](double x, double y) {
        return 1.0 + std::cos(x) * std::sin(y);
    });
    std::vector<double> b = M.multiply(u0.values);
    auto [x, rep] =
        bicgstab_solve(A, b, 1e-10, 10 * A.n, u0.values);
    REQUIRE(rep.converged);
    CHECK(relative_residual(A, x, b) <= 1e-10);
    // column-sum structure conserves discrete mass
    std::vector<double> Mx = M.multiply(x);
    double mass_new = kahan_sum(Mx);
    double mass_old = kahan_sum(b);
    CHECK(std::abs(mass_new - mass_old) <= 1e-10 * std::abs(mass_old));
}

TEST_CASE("zero-mean solve: constant source gives the zero field") {
    TriMesh m = generate_disk_mesh(9.0, 6);
    SparseMatrix K = assemble_stiffness(m);
    SparseMatrix M = assemble_mass(m);
    std::vector<double> rhs = M.multiply(std::vector<double>(M.n, 5.0));
    auto [x, rep] = zero_mean_solve(K, M, rhs, 1e-12);
    CHECK(rep.converged);
    for (double v : x) CHECK(std::abs(v) <= 1e-9);
}

TEST_CASE("zero-mean solve output has zero discrete mean and bounded residual") {
    TriMesh m = generate_disk_mesh(9.0, 8);
    SparseMatrix K = assemble_stiffness(m);
    SparseMatrix M = assemble_mass(m);
    Field s = interpolate(m, [](double x, double y) {
        double r2 = x * x + y * y;
        double bell = 15.0 * std::exp(-r2) * (81.0 - r2);
        return std::pow(std::max(bell, 0.0), 1.1);
    });
    std::vector<double> rhs = M.multiply(s.values);
    auto [x, rep] = zero_mean_solve(K, M, rhs, 1e-10);
    REQUIRE(rep.converged);

    std::vector<double> Mx = M.multiply(x);
    double mean = kahan_sum(Mx);
    double maxabs = 0.0;
    for (double v : x) maxabs = std::max(maxabs, std::abs(v));
    CHECK(std::abs(mean) <= 1e-10 * mesh_area(m) * maxabs);

    // residual of the projected system, recomputed from scratch
    std::vector<double> ones(M.n, 1.0);
    std::vector<double> M1 = M.multiply(ones);
    double sum_rhs = kahan_sum(rhs), sum_M1 = kahan_sum(M1);
    std::vector<double> proj(rhs);
    for (int i = 0; i < M.n; ++i) proj[i] -= (sum_rhs / sum_M1) * M1[i];
    CHECK(relative_residual(K, x, proj) <= 1e-10);

    // a non-constant zero-mean field changes sign
    double mn = 1e300, mx = -1e300;
    for (double v : x) {
        mn = std::min(mn, v);
        mx = std::max(mx, v);
    }
    CHECK(mn < 0.0);
    CHECK(mx > 0.0);
}

TEST_CASE("norm helpers") {
    std::vector<double> v = {3.0, -4.0, 0.0};
    CHECK(norm2(v) == doctest::Approx(5.0));
    CHECK(norm_inf(v) == 4.0);
    CHECK(dot(v, v) == doctest::Approx(25.0));
    CHECK(kahan_sum(v) == doctest::Approx(-1.0));
}
