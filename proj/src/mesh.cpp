#include "specgeo/errors.hpp"
#include "specgeo/manifold.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace specgeo {

namespace {

// Kahan's stable Heron formula; returns a negative value when the triangle
// inequality fails.
double triangle_area_from_lengths(double a, double b, double c)
{
    if (a < b) std::swap(a, b);
    if (a < c) std::swap(a, c);
    if (b < c) std::swap(b, c);
    const double t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    if (c - (a - b) <= 0.0) return -1.0;
    return 0.25 * std::sqrt(std::max(t, 0.0));
}

} // namespace

DiscreteManifold DiscreteManifold::from_positions(
    std::vector<Eigen::Vector3d> positions,
    std::vector<Face> faces,
    std::string label)
{
    DiscreteManifold m;
    m.m_positions = std::move(positions);
    m.m_faces = std::move(faces);
    m.m_label = std::move(label);
    m.build_combinatorics();
    const auto& pos = m.m_positions;
    m.build_metric([&pos](int u, int v) { return (pos[u] - pos[v]).norm(); });
    return m;
}

DiscreteManifold DiscreteManifold::from_lengths(
    std::vector<Eigen::Vector3d> positions,
    std::vector<Face> faces,
    const std::function<double(int, int)>& edge_length,
    std::string label)
{
    DiscreteManifold m;
    m.m_positions = std::move(positions);
    m.m_faces = std::move(faces);
    m.m_label = std::move(label);
    m.build_combinatorics();
    m.build_metric(edge_length);
    return m;
}

void DiscreteManifold::build_combinatorics()
{
    const int nv = vertex_count();
    const int nf = face_count();
    if (nv == 0 || nf == 0) throw MeshError("empty mesh", -1);

    for (int f = 0; f < nf; ++f) {
        const auto& t = m_faces[f];
        for (int c = 0; c < 3; ++c) {
            if (t[c] < 0 || t[c] >= nv) throw MeshError("face references missing vertex", f);
        }
        if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2]) throw MeshError("degenerate face", f);
    }

    m_edges.clear();
    m_edges.reserve(3 * static_cast<size_t>(nf));
    for (const auto& t : m_faces) {
        for (int c = 0; c < 3; ++c) {
            int a = t[(c + 1) % 3], b = t[(c + 2) % 3];
            m_edges.push_back({std::min(a, b), std::max(a, b)});
        }
    }
    std::sort(m_edges.begin(), m_edges.end());
    m_edges.erase(std::unique(m_edges.begin(), m_edges.end()), m_edges.end());

    auto edge_index = [this](int a, int b) {
        EdgeKey key{std::min(a, b), std::max(a, b)};
        auto it = std::lower_bound(m_edges.begin(), m_edges.end(), key);
        return static_cast<int>(it - m_edges.begin());
    };

    const int ne = edge_count();
    std::vector<int> face_count_per_edge(ne, 0);
    std::vector<int> forward_uses(ne, 0);
    m_edge_faces.assign(ne, {-1, -1});
    m_face_edges.resize(nf);
    for (int f = 0; f < nf; ++f) {
        const auto& t = m_faces[f];
        for (int c = 0; c < 3; ++c) {
            const int a = t[(c + 1) % 3], b = t[(c + 2) % 3];
            const int e = edge_index(a, b);
            m_face_edges[f][c] = e;
            const int slot = face_count_per_edge[e]++;
            if (slot < 2) m_edge_faces[e][slot] = f;
            if (a < b) ++forward_uses[e];
        }
    }
    for (int e = 0; e < ne; ++e) {
        if (face_count_per_edge[e] == 1) throw MeshError("open surface: boundary edge", e);
        if (face_count_per_edge[e] > 2) throw MeshError("non-manifold edge", e);
        if (forward_uses[e] != 1) throw MeshError("inconsistent face orientation at edge", e);
    }

    m_adjacency.assign(nv, {});
    for (int e = 0; e < ne; ++e) {
        m_adjacency[m_edges[e][0]].push_back({m_edges[e][1], e});
        m_adjacency[m_edges[e][1]].push_back({m_edges[e][0], e});
    }
    for (auto& nbrs : m_adjacency) std::sort(nbrs.begin(), nbrs.end());

    // The link of every vertex must be a single cycle.
    std::vector<std::vector<std::pair<int, int>>> link(nv);
    for (const auto& t : m_faces) {
        for (int c = 0; c < 3; ++c) link[t[c]].push_back({t[(c + 1) % 3], t[(c + 2) % 3]});
    }
    for (int v = 0; v < nv; ++v) {
        auto& arcs = link[v];
        if (arcs.empty()) throw MeshError("isolated vertex", v);
        std::sort(arcs.begin(), arcs.end());
        int current = arcs.front().first;
        size_t steps = 0;
        do {
            auto it = std::lower_bound(arcs.begin(), arcs.end(), std::pair<int, int>{current, -1});
            if (it == arcs.end() || it->first != current) throw MeshError("non-manifold vertex", v);
            current = it->second;
            ++steps;
        } while (current != arcs.front().first && steps <= arcs.size());
        if (steps != arcs.size()) throw MeshError("non-manifold vertex", v);
    }
}

void DiscreteManifold::build_metric(const std::function<double(int, int)>& edge_length)
{
    const int ne = edge_count();
    m_edge_lengths.resize(ne);
    for (int e = 0; e < ne; ++e) {
        const double l = edge_length(m_edges[e][0], m_edges[e][1]);
        if (!(l > 0.0) || !std::isfinite(l)) throw MeshError("non-positive edge length", e);
        m_edge_lengths[e] = l;
    }

    const int nf = face_count();
    m_face_areas.resize(nf);
    m_corner_angles.resize(nf);
    for (int f = 0; f < nf; ++f) {
        const auto& fe = m_face_edges[f];
        const double l0 = m_edge_lengths[fe[0]], l1 = m_edge_lengths[fe[1]], l2 = m_edge_lengths[fe[2]];
        const double area = triangle_area_from_lengths(l0, l1, l2);
        if (area < 0.0) throw MeshError("triangle inequality violated", f);
        m_face_areas[f] = area;
        const std::array<double, 3> l{l0, l1, l2};
        for (int c = 0; c < 3; ++c) {
            const double a = l[c], b = l[(c + 1) % 3], d = l[(c + 2) % 3];
            m_corner_angles[f][c] = std::atan2(4.0 * area, b * b + d * d - a * a);
        }
    }
    const double mean_area = std::accumulate(m_face_areas.begin(), m_face_areas.end(), 0.0) / nf;
    for (int f = 0; f < nf; ++f) {
        if (m_face_areas[f] < 1e-12 * mean_area) throw MeshError("degenerate face", f);
    }

    m_vertex_volumes.assign(vertex_count(), 0.0);
    for (int f = 0; f < nf; ++f) {
        for (int c = 0; c < 3; ++c) m_vertex_volumes[m_faces[f][c]] += m_face_areas[f] / 3.0;
    }
    m_total_volume = 0.0;
    for (double v : m_vertex_volumes) m_total_volume += v;
}

int DiscreteManifold::find_edge(int u, int v) const
{
    EdgeKey key{std::min(u, v), std::max(u, v)};
    auto it = std::lower_bound(m_edges.begin(), m_edges.end(), key);
    if (it == m_edges.end() || *it != key) return -1;
    return static_cast<int>(it - m_edges.begin());
}

ScalarField DiscreteManifold::make_field(Eigen::VectorXd values) const
{
    if (values.size() != vertex_count()) throw DomainError("field length does not match vertex count");
    for (Eigen::Index i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw DomainError("field value is not finite at vertex " + std::to_string(i));
    }
    return ScalarField{std::move(values), m_label};
}

DiscreteManifold DiscreteManifold::scaled(double s) const
{
    if (!(s > 0.0)) throw DomainError("scale factor must be positive");
    DiscreteManifold m = *this;
    for (auto& p : m.m_positions) p *= s;
    const auto lengths = m_edge_lengths;
    const auto& edges = m_edges;
    auto lookup = [&](int u, int v) {
        EdgeKey key{std::min(u, v), std::max(u, v)};
        auto it = std::lower_bound(edges.begin(), edges.end(), key);
        return s * lengths[it - edges.begin()];
    };
    m.build_metric(lookup);
    return m;
}

DiscreteManifold DiscreteManifold::relabeled(std::string label) const
{
    DiscreteManifold m = *this;
    m.m_label = std::move(label);
    return m;
}

std::vector<double> angle_defects(const DiscreteManifold& mesh)
{
    std::vector<double> sums(mesh.vertex_count(), 0.0);
    const auto& faces = mesh.faces();
    const auto& angles = mesh.corner_angles();
    for (int f = 0; f < mesh.face_count(); ++f) {
        for (int c = 0; c < 3; ++c) sums[faces[f][c]] += angles[f][c];
    }
    std::vector<double> defects(sums.size());
    for (size_t v = 0; v < sums.size(); ++v) defects[v] = 2.0 * std::numbers::pi - sums[v];
    return defects;
}

ScalarField curvature_lowest(const DiscreteManifold& mesh)
{
    const auto defects = angle_defects(mesh);
    const auto& vol = mesh.vertex_volumes();
    Eigen::VectorXd rho(mesh.vertex_count());
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        const double d = std::abs(defects[v]) < 1e-12 ? 0.0 : defects[v];
        rho[v] = d / vol[v];
    }
    return ScalarField{std::move(rho), mesh.label()};
}

ScalarField negative_part(const ScalarField& f)
{
    return ScalarField{(-f.values).cwiseMax(0.0), f.label};
}

int connected_components(const DiscreteManifold& mesh)
{
    const int n = mesh.vertex_count();
    std::vector<int> seen(n, 0);
    std::vector<int> stack;
    int components = 0;
    for (int s = 0; s < n; ++s) {
        if (seen[s]) continue;
        ++components;
        seen[s] = 1;
        stack.push_back(s);
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            for (auto [u, e] : mesh.neighbors(v)) {
                if (!seen[u]) {
                    seen[u] = 1;
                    stack.push_back(u);
                }
            }
        }
    }
    return components;
}

} // namespace specgeo
