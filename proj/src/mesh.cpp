#include "chemotax/mesh.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace chemotax {

namespace {

double signed_area(const std::array<double, 2>& a,
                   const std::array<double, 2>& b,
                   const std::array<double, 2>& c) {
    return 0.5 * ((b[0] - a[0]) * (c[1] - a[1]) -
                  (c[0] - a[0]) * (b[1] - a[1]));
}

[[noreturn]] void fail(const std::string& msg) {
    throw std::runtime_error("mesh: " + msg);
}

}  // namespace

std::uint64_t next_mesh_id() {
    static std::atomic<std::uint64_t> counter{1};
    return counter.fetch_add(1);
}

TriMesh generate_disk_mesh(double radius, int n_rings) {
    if (!(radius > 0.0))
        throw std::invalid_argument("generate_disk_mesh: radius must be > 0");
    if (n_rings < 1)
        throw std::invalid_argument("generate_disk_mesh: n_rings must be >= 1");

    TriMesh m;
    m.vertices.reserve(1 + 3 * n_rings * (n_rings + 1));
    m.triangles.reserve(6 * n_rings * n_rings);
    m.vertices.push_back({0.0, 0.0});

    std::vector<int> ring_start(n_rings + 2, 0);
    ring_start[1] = 1;
    for (int j = 1; j <= n_rings; ++j) {
        int count = 6 * j;
        double r = j * radius / n_rings;
        for (int i = 0; i < count; ++i) {
            double a = 2.0 * M_PI * i / count;
            m.vertices.push_back({r * std::cos(a), r * std::sin(a)});
        }
        ring_start[j + 1] = ring_start[j] + count;
    }

    for (int i = 0; i < 6; ++i)
        m.triangles.push_back({0, 1 + i, 1 + (i + 1) % 6});

    // Merge ring j (inner, P vertices) with ring j+1 (outer, Q vertices) by
    // walking both in angular order.
    for (int j = 1; j < n_rings; ++j) {
        int P = 6 * j, Q = 6 * (j + 1);
        int si = ring_start[j], so = ring_start[j + 1];
        int a = 0, b = 0;
        while (a < P || b < Q) {
            double tin = a < P ? 2.0 * M_PI * (a + 1) / P : HUGE_VAL;
            double tout = b < Q ? 2.0 * M_PI * (b + 1) / Q : HUGE_VAL;
            if (tout <= tin) {
                m.triangles.push_back(
                    {so + b % Q, so + (b + 1) % Q, si + a % P});
                ++b;
            } else {
                m.triangles.push_back(
                    {si + a % P, so + b % Q, si + (a + 1) % P});
                ++a;
            }
        }
    }

    m.boundary_vertex.assign(m.vertices.size(), 0);
    for (int i = ring_start[n_rings]; i < ring_start[n_rings + 1]; ++i)
        m.boundary_vertex[i] = 1;
    m.id = next_mesh_id();
    validate_mesh(m);
    return m;
}

double triangle_area(const TriMesh& mesh, int t) {
    const auto& tri = mesh.triangles[t];
    return signed_area(mesh.vertices[tri[0]], mesh.vertices[tri[1]],
                       mesh.vertices[tri[2]]);
}

double mesh_area(const TriMesh& mesh) {
    double sum = 0.0, comp = 0.0;
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        double y = triangle_area(mesh, t) - comp;
        double s = sum + y;
        comp = (s - sum) - y;
        sum = s;
    }
    return sum;
}

EdgeCensus count_edges(const TriMesh& mesh) {
    std::unordered_map<std::uint64_t, int> incidence;
    incidence.reserve(3 * mesh.triangles.size());
    const std::uint64_t n = mesh.vertices.size();
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            std::uint64_t u = tri[e], v = tri[(e + 1) % 3];
            if (u > v) std::swap(u, v);
            ++incidence[u * n + v];
        }
    EdgeCensus census;
    census.n_edges = static_cast<long>(incidence.size());
    for (const auto& [key, count] : incidence) {
        if (count == 1) ++census.n_boundary_edges;
        census.max_incidence = std::max<long>(census.max_incidence, count);
    }
    return census;
}

void validate_mesh(const TriMesh& mesh) {
    const int nv = mesh.n_vertices();
    if (nv == 0) fail("no vertices");
    if (mesh.boundary_vertex.size() != mesh.vertices.size())
        fail("boundary flag count does not match vertex count");
    for (int t = 0; t < mesh.n_triangles(); ++t) {
        const auto& tri = mesh.triangles[t];
        for (int v : tri)
            if (v < 0 || v >= nv)
                fail("triangle " + std::to_string(t) +
                     " references vertex " + std::to_string(v) +
                     " outside [0, " + std::to_string(nv) + ")");
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2])
            fail("triangle " + std::to_string(t) + " repeats a vertex");
        if (!(triangle_area(mesh, t) > 0.0))
            fail("triangle " + std::to_string(t) +
                 " is not positively oriented");
    }

    const std::uint64_t n = nv;
    std::unordered_map<std::uint64_t, int> incidence;
    incidence.reserve(3 * mesh.triangles.size());
    for (const auto& tri : mesh.triangles)
        for (int e = 0; e < 3; ++e) {
            std::uint64_t u = tri[e], v = tri[(e + 1) % 3];
            if (u > v) std::swap(u, v);
            int c = ++incidence[u * n + v];
            if (c > 2)
                fail("edge (" + std::to_string(u) + ", " + std::to_string(v) +
                     ") is shared by more than two triangles");
        }

    std::vector<std::uint8_t> on_boundary(nv, 0);
    for (const auto& [key, count] : incidence)
        if (count == 1) {
            on_boundary[key / n] = 1;
            on_boundary[key % n] = 1;
        }
    for (int i = 0; i < nv; ++i)
        if ((mesh.boundary_vertex[i] != 0) != (on_boundary[i] != 0))
            fail("vertex " + std::to_string(i) +
                 " has an inconsistent boundary flag");
}

void save_mesh(const TriMesh& mesh, const std::string& path) {
    std::ofstream os(path);
    if (!os) fail("cannot open '" + path + "' for writing");
    os << mesh.n_vertices() << ' ' << mesh.n_triangles() << '\n';
    char buf[128];
    for (int i = 0; i < mesh.n_vertices(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g %.17g %d", mesh.vertices[i][0],
                      mesh.vertices[i][1], mesh.boundary_vertex[i] ? 1 : 0);
        os << buf << '\n';
    }
    for (const auto& tri : mesh.triangles)
        os << tri[0] << ' ' << tri[1] << ' ' << tri[2] << '\n';
    if (!os) fail("write to '" + path + "' failed");
}

TriMesh load_mesh(const std::string& path, bool strict) {
    std::ifstream is(path);
    if (!is) fail("cannot open '" + path + "'");

    auto where = [&path](int line) {
        return path + ":" + std::to_string(line) + ": ";
    };

    std::string raw;
    int line_no = 0;
    // Yields the next non-blank, comment-stripped line.
    auto next_line = [&](std::istringstream& ls) {
        while (std::getline(is, raw)) {
            ++line_no;
            auto hash = raw.find('#');
            if (hash != std::string::npos) raw.erase(hash);
            if (raw.find_first_not_of(" \t\r") == std::string::npos) continue;
            ls.clear();
            ls.str(raw);
            return true;
        }
        return false;
    };

    std::istringstream ls;
    if (!next_line(ls)) fail(path + ": empty file");
    int nv = 0, nt = 0;
    if (!(ls >> nv >> nt) || nv < 1 || nt < 0)
        fail(where(line_no) + "expected vertex and triangle counts");

    TriMesh m;
    m.vertices.resize(nv);
    m.boundary_vertex.resize(nv);
    for (int i = 0; i < nv; ++i) {
        if (!next_line(ls)) fail(path + ": truncated vertex list");
        double x, y;
        int b;
        if (!(ls >> x >> y >> b) || (b != 0 && b != 1))
            fail(where(line_no) + "expected `x y b` with b in {0,1}");
        m.vertices[i] = {x, y};
        m.boundary_vertex[i] = static_cast<std::uint8_t>(b);
    }
    m.triangles.resize(nt);
    for (int t = 0; t < nt; ++t) {
        if (!next_line(ls)) fail(path + ": truncated triangle list");
        int a, b, c;
        if (!(ls >> a >> b >> c))
            fail(where(line_no) + "expected three vertex indices");
        if (a < 0 || a >= nv || b < 0 || b >= nv || c < 0 || c >= nv)
            fail(where(line_no) + "vertex index out of range");
        m.triangles[t] = {a, b, c};
        if (triangle_area(m, t) < 0.0) {
            if (strict)
                fail(where(line_no) + "negatively oriented triangle " +
                     std::to_string(t) + " (strict mode)");
            std::swap(m.triangles[t][1], m.triangles[t][2]);
        }
    }
    if (next_line(ls)) fail(where(line_no) + "trailing content");

    m.id = next_mesh_id();
    validate_mesh(m);
    return m;
}

}  // namespace chemotax
