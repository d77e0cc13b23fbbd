#pragma once

#include <Eigen/Core>

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

namespace specgeo {

using Face = std::array<int, 3>;
using EdgeKey = std::array<int, 2>;

/// Per-vertex real values bound to a manifold by label.
struct ScalarField
{
    Eigen::VectorXd values;
    std::string label;

    Eigen::Index size() const { return values.size(); }
    double operator[](Eigen::Index i) const { return values[i]; }
};

/// Closed, oriented triangle surface with an intrinsic (edge-length) metric.
///
/// Every geometric quantity (angles, areas, cotangent weights) is derived from
/// the edge lengths; vertex positions are carried only for export and for the
/// generators that embed the surface in R^3. Instances are immutable.
class DiscreteManifold
{
public:
    /// Edge lengths from the Euclidean distance between positions.
    static DiscreteManifold from_positions(
        std::vector<Eigen::Vector3d> positions,
        std::vector<Face> faces,
        std::string label);

    /// Edge lengths supplied per (u, v) vertex pair; used for flat quotients
    /// whose metric is not induced by the stored positions.
    static DiscreteManifold from_lengths(
        std::vector<Eigen::Vector3d> positions,
        std::vector<Face> faces,
        const std::function<double(int, int)>& edge_length,
        std::string label);

    int vertex_count() const { return static_cast<int>(m_positions.size()); }
    int edge_count() const { return static_cast<int>(m_edges.size()); }
    int face_count() const { return static_cast<int>(m_faces.size()); }
    int dimension() const { return 2; }

    const std::vector<Eigen::Vector3d>& positions() const { return m_positions; }
    const std::vector<Face>& faces() const { return m_faces; }
    /// Sorted (a < b) vertex pairs, lexicographically ordered.
    const std::vector<EdgeKey>& edges() const { return m_edges; }
    const std::vector<double>& edge_lengths() const { return m_edge_lengths; }
    /// face_edges()[f][c] is the edge opposite corner c of face f.
    const std::vector<std::array<int, 3>>& face_edges() const { return m_face_edges; }
    /// The two faces sharing each edge.
    const std::vector<std::array<int, 2>>& edge_faces() const { return m_edge_faces; }
    const std::vector<double>& face_areas() const { return m_face_areas; }
    /// Interior angle at each corner.
    const std::vector<std::array<double, 3>>& corner_angles() const { return m_corner_angles; }
    /// Barycentric (lumped) areas.
    const std::vector<double>& vertex_volumes() const { return m_vertex_volumes; }
    double total_volume() const { return m_total_volume; }
    const std::string& label() const { return m_label; }

    /// Neighbours of v as (vertex, edge index), sorted by vertex.
    const std::vector<std::pair<int, int>>& neighbors(int v) const { return m_adjacency[v]; }

    /// Index of edge {u, v}, or -1.
    int find_edge(int u, int v) const;

    int euler_characteristic() const { return vertex_count() - edge_count() + face_count(); }

    ScalarField make_field(Eigen::VectorXd values) const;

    /// Uniform metric scaling by s > 0 (positions and lengths multiplied by s).
    DiscreteManifold scaled(double s) const;

    DiscreteManifold relabeled(std::string label) const;

private:
    DiscreteManifold() = default;

    void build_combinatorics();
    void build_metric(const std::function<double(int, int)>& edge_length);

    std::vector<Eigen::Vector3d> m_positions;
    std::vector<Face> m_faces;
    std::vector<EdgeKey> m_edges;
    std::vector<double> m_edge_lengths;
    std::vector<std::array<int, 3>> m_face_edges;
    std::vector<std::array<int, 2>> m_edge_faces;
    std::vector<double> m_face_areas;
    std::vector<std::array<double, 3>> m_corner_angles;
    std::vector<double> m_vertex_volumes;
    std::vector<std::vector<std::pair<int, int>>> m_adjacency;
    double m_total_volume = 0.0;
    std::string m_label;
};

enum class MeshFormat { off, obj };

/// Reads an OFF or OBJ triangle mesh. Non-vertex/face OBJ records are skipped
/// and reported through `warnings`.
DiscreteManifold load_mesh(
    const std::filesystem::path& path,
    MeshFormat format,
    std::vector<std::string>* warnings = nullptr);

/// Format deduced from the file extension.
DiscreteManifold load_mesh(const std::filesystem::path& path, std::vector<std::string>* warnings = nullptr);

void save_off(const DiscreteManifold& mesh, const std::filesystem::path& path);

DiscreteManifold make_icosphere(int subdivisions, double radius);
DiscreteManifold make_flat_torus_mesh(double lx, double ly, int nx, int ny);
DiscreteManifold make_bumpy_sphere(int subdivisions, double amplitude, int frequency, std::uint64_t seed);

/// Lowest Ricci eigenvalue per vertex; on a surface this is the Gaussian
/// curvature, discretised as angle defect over vertex volume. Defects below
/// 1e-12 in magnitude are rounded to zero.
ScalarField curvature_lowest(const DiscreteManifold& mesh);

/// Raw angle defects 2*pi - sum of incident angles.
std::vector<double> angle_defects(const DiscreteManifold& mesh);

/// max(0, -f) pointwise.
ScalarField negative_part(const ScalarField& f);

struct DistanceField
{
    int source = 0;
    std::vector<double> distance;
};

/// Shortest-path distances along mesh edges (an over-approximation of the
/// geodesic distance).
DistanceField geodesic_distances(const DiscreteManifold& mesh, int source);

struct DiameterResult
{
    double value = 0.0;
    /// False when the value came from farthest-point sampling (a lower bound).
    bool exact = true;
    int sources_used = 0;
};

DiameterResult diameter(const DiscreteManifold& mesh);

/// Largest distance from the source vertex.
double eccentricity(const DistanceField& dist);

/// Closed ball {v : d(v) <= r}, sorted vertex indices.
std::vector<int> ball_indicator(const DistanceField& dist, double r);

/// First Betti number over Q via exact integer elimination of the boundary maps.
int betti_one(const DiscreteManifold& mesh);

/// Rank over Q of a sparse integer matrix given as rows of (column, value).
int exact_rank(std::vector<std::vector<std::pair<int, long long>>> rows);

/// Number of connected components of the vertex-edge graph.
int connected_components(const DiscreteManifold& mesh);

} // namespace specgeo
