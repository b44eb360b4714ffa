#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace chemotax {

// Conforming triangulation of a disk (or any loaded planar domain).
// Immutable after construction; `id` tags fields to their mesh.
struct TriMesh {
    std::vector<std::array<double, 2>> vertices;
    std::vector<std::array<int, 3>> triangles;   // CCW vertex indices
    std::vector<std::uint8_t> boundary_vertex;   // 1 if vertex lies on the boundary
    std::uint64_t id = 0;

    int n_vertices() const { return static_cast<int>(vertices.size()); }
    int n_triangles() const { return static_cast<int>(triangles.size()); }
};

// Fresh identity tag for a newly built mesh.
std::uint64_t next_mesh_id();

// Structured disk mesh: ring j of n_rings carries 6j vertices at radius
// j*radius/n_rings; rings are triangulated by an angle-merge pass.
// Throws std::invalid_argument on radius <= 0 or n_rings < 1.
TriMesh generate_disk_mesh(double radius, int n_rings);

double triangle_area(const TriMesh& mesh, int t);
double mesh_area(const TriMesh& mesh);

// Distinct-edge census used by conformity checks and tests.
struct EdgeCensus {
    long n_edges = 0;
    long n_boundary_edges = 0;   // edges with exactly one incident triangle
    long max_incidence = 0;      // max triangles sharing one edge
};
EdgeCensus count_edges(const TriMesh& mesh);

// Throws std::runtime_error naming the offending triangle/vertex when an
// invariant fails (index range, distinctness, orientation, conformity,
// boundary flags).
void validate_mesh(const TriMesh& mesh);

// Text format: `n_v n_t`, then n_v lines `x y b`, then n_t lines `i j k`.
// Coordinates are written with 17 significant digits (bit round-trip);
// `#` starts a comment. load_mesh re-orients negative triangles unless
// strict; validation errors name the line.
void save_mesh(const TriMesh& mesh, const std::string& path);
TriMesh load_mesh(const std::string& path, bool strict = false);

}  // namespace chemotax
