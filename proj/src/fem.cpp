#include "chemotax/fem.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace chemotax {

Field::Field(const TriMesh& mesh, std::vector<double> v)
    : values(std::move(v)), mesh_id(mesh.id) {
    if (static_cast<int>(values.size()) != mesh.n_vertices())
        throw std::invalid_argument(
            "Field: value count does not match vertex count");
    for (double x : values)
        if (!std::isfinite(x))
            throw std::invalid_argument("Field: non-finite value");
}

double Field::max() const {
    if (values.empty()) throw std::logic_error("Field::max on empty field");
    return *std::max_element(values.begin(), values.end());
}

double Field::min() const {
    if (values.empty()) throw std::logic_error("Field::min on empty field");
    return *std::min_element(values.begin(), values.end());
}

Field constant_field(const TriMesh& mesh, double value) {
    return Field(mesh, std::vector<double>(mesh.n_vertices(), value));
}

Field interpolate(const TriMesh& mesh,
                  const std::function<double(double, double)>& fn) {
    std::vector<double> v(mesh.n_vertices());
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        v[i] = fn(mesh.vertices[i][0], mesh.vertices[i][1]);
        if (!std::isfinite(v[i]))
            throw std::invalid_argument(
                "interpolate: non-finite sample at vertex " +
                std::to_string(i));
    }
    return Field(mesh, std::move(v));
}

double integrate(const TriMesh& mesh, const Field& field) {
    if (field.mesh_id != mesh.id)
        throw std::invalid_argument("integrate: field belongs to another mesh");
    double sum = 0.0, comp = 0.0;
    for (const auto& tri : mesh.triangles) {
        const auto &a = mesh.vertices[tri[0]], &b = mesh.vertices[tri[1]],
                   &c = mesh.vertices[tri[2]];
        double area = 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) -
                             (c[0] - a[0]) * (b[1] - a[1]));
        double term = area * (field.values[tri[0]] + field.values[tri[1]] +
                              field.values[tri[2]]) /
                      3.0;
        double y = term - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

Field apply_production(const Field& s, ProductionLaw law, double coeff,
                       double exponent) {
    if (!(exponent > 0.0))
        throw std::invalid_argument("apply_production: exponent must be > 0");
    Field out = s;
    if (law == ProductionLaw::f_alpha_k) {
        for (double& x : out.values)
            x = coeff * std::pow(std::max(x, 0.0), exponent);
    } else {
        for (double& x : out.values)
            x = coeff * std::pow(1.0 + std::max(x, 0.0), exponent);
    }
    return out;
}

Assembler::Assembler(const TriMesh& mesh) : mesh_(&mesh) {
    const int nt = mesh.n_triangles();
    const int nv = mesh.n_vertices();
    b_.resize(3 * nt);
    c_.resize(3 * nt);
    area_.resize(nt);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        const auto &p0 = mesh.vertices[tri[0]], &p1 = mesh.vertices[tri[1]],
                   &p2 = mesh.vertices[tri[2]];
        b_[3 * t + 0] = p1[1] - p2[1];
        b_[3 * t + 1] = p2[1] - p0[1];
        b_[3 * t + 2] = p0[1] - p1[1];
        c_[3 * t + 0] = p2[0] - p1[0];
        c_[3 * t + 1] = p0[0] - p2[0];
        c_[3 * t + 2] = p1[0] - p0[0];
        area_[t] = 0.5 * ((p1[0] - p0[0]) * (p2[1] - p0[1]) -
                          (p2[0] - p0[0]) * (p1[1] - p0[1]));
    }

    std::vector<std::vector<int>> adj(nv);
    for (int i = 0; i < nv; ++i) adj[i].push_back(i);
    for (const auto& tri : mesh.triangles)
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                if (i != j) adj[tri[i]].push_back(tri[j]);
    row_ptr_.assign(nv + 1, 0);
    for (int i = 0; i < nv; ++i) {
        auto& row = adj[i];
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
        row_ptr_[i + 1] = row_ptr_[i] + static_cast<int>(row.size());
    }
    col_idx_.reserve(row_ptr_[nv]);
    for (int i = 0; i < nv; ++i)
        col_idx_.insert(col_idx_.end(), adj[i].begin(), adj[i].end());

    tri_slot_.resize(9 * nt);
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh.triangles[t];
        for (int i = 0; i < 3; ++i) {
            const int* lo = col_idx_.data() + row_ptr_[tri[i]];
            const int* hi = col_idx_.data() + row_ptr_[tri[i] + 1];
            for (int j = 0; j < 3; ++j) {
                const int* it = std::lower_bound(lo, hi, tri[j]);
                tri_slot_[9 * t + 3 * i + j] =
                    static_cast<int>(it - col_idx_.data());
            }
        }
    }
}

SparseMatrix Assembler::zeros() const {
    SparseMatrix A;
    A.n = mesh_->n_vertices();
    A.row_ptr = row_ptr_;
    A.col_idx = col_idx_;
    A.vals.assign(col_idx_.size(), 0.0);
    return A;
}

SparseMatrix Assembler::mass(bool lumped) const {
    SparseMatrix M = zeros();
    const int nt = mesh_->n_triangles();
    for (int t = 0; t < nt; ++t) {
        double a = area_[t];
        if (lumped) {
            for (int i = 0; i < 3; ++i)
                M.vals[tri_slot_[9 * t + 3 * i + i]] += a / 3.0;
        } else {
            for (int i = 0; i < 3; ++i)
                for (int j = 0; j < 3; ++j)
                    M.vals[tri_slot_[9 * t + 3 * i + j]] +=
                        (i == j ? 2.0 : 1.0) * a / 12.0;
        }
    }
    return M;
}

namespace {

void check_degenerate(const TriMesh& mesh, const std::vector<double>& area) {
    for (size_t t = 0; t < area.size(); ++t) {
        const auto& tri = mesh.triangles[t];
        double edge2 = 0.0;
        for (int e = 0; e < 3; ++e) {
            const auto &p = mesh.vertices[tri[e]],
                       &q = mesh.vertices[tri[(e + 1) % 3]];
            double dx = q[0] - p[0], dy = q[1] - p[1];
            edge2 = std::max(edge2, dx * dx + dy * dy);
        }
        if (!(area[t] > 1e-12 * edge2))
            throw std::runtime_error("assembly: degenerate triangle " +
                                     std::to_string(t));
    }
}

}  // namespace

SparseMatrix Assembler::stiffness() const {
    check_degenerate(*mesh_, area_);
    SparseMatrix K = zeros();
    const int nt = mesh_->n_triangles();
    for (int t = 0; t < nt; ++t) {
        double inv4a = 1.0 / (4.0 * area_[t]);
        const double* b = b_.data() + 3 * t;
        const double* c = c_.data() + 3 * t;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                K.vals[tri_slot_[9 * t + 3 * i + j]] +=
                    (b[i] * b[j] + c[i] * c[j]) * inv4a;
    }
    return K;
}

void Assembler::convection_into(const Field& potential,
                                SparseMatrix& out) const {
    if (potential.mesh_id != mesh_->id)
        throw std::invalid_argument(
            "convection: potential belongs to another mesh");
    if (out.col_idx.size() != col_idx_.size() ||
        out.n != mesh_->n_vertices())
        throw std::invalid_argument(
            "convection: output matrix has a foreign pattern");
    check_degenerate(*mesh_, area_);
    std::fill(out.vals.begin(), out.vals.end(), 0.0);
    const int nt = mesh_->n_triangles();
    const double* phi = potential.values.data();
    for (int t = 0; t < nt; ++t) {
        const auto& tri = mesh_->triangles[t];
        const double* b = b_.data() + 3 * t;
        const double* c = c_.data() + 3 * t;
        double inv2a = 1.0 / (2.0 * area_[t]);
        double gx = (phi[tri[0]] * b[0] + phi[tri[1]] * b[1] +
                     phi[tri[2]] * b[2]) *
                    inv2a;
        double gy = (phi[tri[0]] * c[0] + phi[tri[1]] * c[1] +
                     phi[tri[2]] * c[2]) *
                    inv2a;
        // row entry (A/3) * grad(Phi).grad(phi_i), identical across columns
        for (int i = 0; i < 3; ++i) {
            double gi = (gx * b[i] + gy * c[i]) * inv2a;
            double entry = area_[t] / 3.0 * gi;
            for (int j = 0; j < 3; ++j)
                out.vals[tri_slot_[9 * t + 3 * i + j]] += entry;
        }
    }
}

SparseMatrix Assembler::convection(const Field& potential) const {
    SparseMatrix C = zeros();
    convection_into(potential, C);
    return C;
}

SparseMatrix assemble_mass(const TriMesh& mesh, bool lumped) {
    return Assembler(mesh).mass(lumped);
}

SparseMatrix assemble_stiffness(const TriMesh& mesh) {
    return Assembler(mesh).stiffness();
}

SparseMatrix assemble_convection(const TriMesh& mesh, const Field& potential) {
    return Assembler(mesh).convection(potential);
}

void save_field_csv(const TriMesh& mesh, const Field& field,
                    const std::string& path) {
    if (field.mesh_id != mesh.id)
        throw std::invalid_argument(
            "save_field_csv: field belongs to another mesh");
    std::ofstream os(path);
    if (!os)
        throw std::runtime_error("save_field_csv: cannot open '" + path + "'");
    os << "index,x,y,value\n";
    char buf[160];
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g,%.17g", i,
                      mesh.vertices[i][0], mesh.vertices[i][1],
                      field.values[i]);
        os << buf << '\n';
    }
    if (!os)
        throw std::runtime_error("save_field_csv: write to '" + path +
                                 "' failed");
}

}  // namespace chemotax
