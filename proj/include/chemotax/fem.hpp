#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chemotax/mesh.hpp"
#include "chemotax/sparse.hpp"

namespace chemotax {

// Nodal scalar field tied to a mesh by id. All values finite.
struct Field {
    std::vector<double> values;
    std::uint64_t mesh_id = 0;

    Field() = default;
    // Throws std::invalid_argument on length mismatch or non-finite entries.
    Field(const TriMesh& mesh, std::vector<double> v);

    int size() const { return static_cast<int>(values.size()); }
    bool empty() const { return values.empty(); }
    double max() const;
    double min() const;
};

Field constant_field(const TriMesh& mesh, double value);

// Nodal interpolation; throws std::invalid_argument if the function is
// NaN/Inf at any vertex.
Field interpolate(const TriMesh& mesh,
                  const std::function<double(double, double)>& fn);

// Integral of the P1 interpolant: sum over triangles of area * vertex mean.
double integrate(const TriMesh& mesh, const Field& field);

enum class ProductionLaw { f_alpha_k, g_gamma_l };

// f(s) = coeff * max(s,0)^exponent; g(s) = coeff * (1 + max(s,0))^exponent.
// Negative nodal values are clamped to 0 inside the law (the transport
// scheme has no discrete maximum principle; undershoot stays visible in
// min_u diagnostics). Throws std::invalid_argument on exponent <= 0.
Field apply_production(const Field& s, ProductionLaw law, double coeff,
                       double exponent);

// Precomputes per-triangle geometry and the CSR pattern of the P1 vertex
// adjacency so repeated assemblies (the convection matrix changes every
// step) cost one scatter pass.
class Assembler {
  public:
    explicit Assembler(const TriMesh& mesh);

    const TriMesh& mesh() const { return *mesh_; }
    SparseMatrix zeros() const;  // canonical pattern, zero values

    SparseMatrix mass(bool lumped = false) const;
    SparseMatrix stiffness() const;  // throws on degenerate triangles
    SparseMatrix convection(const Field& potential) const;
    // Overwrites `out`, which must carry the canonical pattern.
    void convection_into(const Field& potential, SparseMatrix& out) const;

  private:
    const TriMesh* mesh_;
    std::vector<double> b_, c_;     // 3 per triangle: gradient coefficients
    std::vector<double> area_;      // per triangle
    std::vector<int> row_ptr_, col_idx_;
    std::vector<int> tri_slot_;     // 9 CSR value slots per triangle
};

// One-shot wrappers over Assembler.
SparseMatrix assemble_mass(const TriMesh& mesh, bool lumped = false);
SparseMatrix assemble_stiffness(const TriMesh& mesh);
SparseMatrix assemble_convection(const TriMesh& mesh, const Field& potential);

// Field CSV: one row per vertex `index,x,y,value`.
void save_field_csv(const TriMesh& mesh, const Field& field,
                    const std::string& path);

}  // namespace chemotax
