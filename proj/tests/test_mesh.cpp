#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <set>
#include <stdexcept>

#include "chemotax/mesh.hpp"

using namespace chemotax;

namespace {
std::string temp_path(const char* name) {
    return std::string("./") + name;
}
}  // namespace

TEST_CASE("single-ring disk mesh is the inscribed hexagon") {
    TriMesh m = generate_disk_mesh(9.0, 1);
    CHECK(m.n_vertices() == 7);
    CHECK(m.n_triangles() == 6);
    // (3*sqrt(3)/2) * 81
    const double hexagon = 210.44417311961862;
    CHECK(mesh_area(m) == doctest::Approx(hexagon).epsilon(1e-12));
    CHECK(m.boundary_vertex[0] == 0);
    for (int i = 1; i < 7; ++i) CHECK(m.boundary_vertex[i] == 1);
}

TEST_CASE("vertex and triangle counts follow the ring construction") {
    for (int n : {1, 2, 3, 7, 12}) {
        TriMesh m = generate_disk_mesh(2.5, n);
        CHECK(m.n_vertices() == 1 + 3 * n * (n + 1));
        CHECK(m.n_triangles() == 6 * n * n);
        CHECK_NOTHROW(validate_mesh(m));
    }
}

TEST_CASE("disk area converges to pi R^2") {
    TriMesh m = generate_disk_mesh(9.0, 40);
    const double disk = 81.0 * M_PI;
    CHECK(std::abs(mesh_area(m) - disk) / disk < 0.005);
}

TEST_CASE("boundary vertices sit on the circle") {
    TriMesh m = generate_disk_mesh(9.0, 5);
    for (int i = 0; i < m.n_vertices(); ++i) {
        double r = std::hypot(m.vertices[i][0], m.vertices[i][1]);
        if (m.boundary_vertex[i]) CHECK(std::abs(r - 9.0) <= 1e-12 * 9.0);
        else CHECK(r < 9.0 - 1e-9);
    }
}

TEST_CASE("all triangles positively oriented") {
    TriMesh m = generate_disk_mesh(3.0, 6);
    for (int t = 0; t < m.n_triangles(); ++t) CHECK(triangle_area(m, t) > 0.0);
}

TEST_CASE("triangle areas sum to the shoelace polygon area") {
    TriMesh m = generate_disk_mesh(9.0, 8);
    // Boundary loop = outermost ring vertices in angular order; shoelace on
    // the convex hull equals the triangulated area for a disk mesh.
    std::vector<int> boundary;
    for (int i = 0; i < m.n_vertices(); ++i)
        if (m.boundary_vertex[i]) boundary.push_back(i);
    // Ring vertices are emitted in angular order, so sort by angle.
    std::sort(boundary.begin(), boundary.end(), [&](int a, int b) {
        return std::atan2(m.vertices[a][1], m.vertices[a][0]) <
               std::atan2(m.vertices[b][1], m.vertices[b][0]);
    });
    double shoelace = 0.0;
    for (size_t i = 0; i < boundary.size(); ++i) {
        auto& p = m.vertices[boundary[i]];
        auto& q = m.vertices[boundary[(i + 1) % boundary.size()]];
        shoelace += p[0] * q[1] - q[0] * p[1];
    }
    shoelace *= 0.5;
    CHECK(std::abs(mesh_area(m) - shoelace) <= 1e-10 * shoelace);
}

TEST_CASE("Euler relation and boundary loop") {
    for (int n : {1, 3, 9}) {
        TriMesh m = generate_disk_mesh(4.0, n);
        EdgeCensus e = count_edges(m);
        CHECK(m.n_vertices() - e.n_edges + m.n_triangles() == 1);
        long n_boundary_vertices = 0;
        for (auto f : m.boundary_vertex) n_boundary_vertices += f;
        CHECK(e.n_boundary_edges == n_boundary_vertices);
        CHECK(e.max_incidence <= 2);
    }
}

TEST_CASE("generator rejects bad arguments") {
    CHECK_THROWS_AS(generate_disk_mesh(-1.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(generate_disk_mesh(0.0, 4), std::invalid_argument);
    CHECK_THROWS_AS(generate_disk_mesh(1.0, 0), std::invalid_argument);
}

TEST_CASE("save/load round-trips exactly") {
    TriMesh m = generate_disk_mesh(9.0, 4);
    std::string path = temp_path("mesh_roundtrip.txt");
    save_mesh(m, path);
    TriMesh r = load_mesh(path);
    REQUIRE(r.n_vertices() == m.n_vertices());
    REQUIRE(r.n_triangles() == m.n_triangles());
    for (int i = 0; i < m.n_vertices(); ++i) {
        CHECK(r.vertices[i][0] == m.vertices[i][0]);
        CHECK(r.vertices[i][1] == m.vertices[i][1]);
        CHECK(r.boundary_vertex[i] == m.boundary_vertex[i]);
    }
    for (int t = 0; t < m.n_triangles(); ++t)
        CHECK(r.triangles[t] == m.triangles[t]);
    std::remove(path.c_str());
}

TEST_CASE("loader rejects out-of-range triangle indices") {
    std::string path = temp_path("mesh_bad_index.txt");
    {
        std::ofstream f(path);
        f << "3 1\n0 0 1\n1 0 1\n0 1 1\n0 1 3\n";
    }
    CHECK_THROWS_AS(load_mesh(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("loader auto-reorients negative triangles unless strict") {
    std::string path = temp_path("mesh_neg_orient.txt");
    {
        std::ofstream f(path);
        f << "# comment line\n";
        f << "3 1\n0 0 1\n1 0 1\n0 1 1\n0 2 1\n";  // clockwise
    }
    TriMesh m = load_mesh(path);
    CHECK(triangle_area(m, 0) > 0.0);
    CHECK_THROWS_AS(load_mesh(path, /*strict=*/true), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("loader rejects non-conforming meshes") {
    // Three triangles sharing one edge.
    std::string path = temp_path("mesh_nonconforming.txt");
    {
        std::ofstream f(path);
        f << "5 3\n0 0 1\n1 0 1\n0 1 1\n1 1 1\n-1 -1 1\n";
        f << "0 1 2\n0 1 3\n";  // edge (0,1) twice so far; third below
        f << "1 0 4\n";
    }
    CHECK_THROWS_AS(load_mesh(path), std::runtime_error);
    std::remove(path.c_str());
}

TEST_CASE("loader rejects repeated vertex inside a triangle") {
    std::string path = temp_path("mesh_repeated_vertex.txt");
    {
        std::ofstream f(path);
        f << "3 1\n0 0 1\n1 0 1\n0 1 1\n0 0 2\n";
    }
    CHECK_THROWS_AS(load_mesh(path), std::runtime_error);
    std::remove(path.c_str());
}
