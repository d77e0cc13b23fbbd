#include "specgeo/errors.hpp"
#include "specgeo/geometry.hpp"
#include "specgeo/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>

namespace specgeo {

namespace {

std::vector<char> membership(const DiscreteManifold& mesh, const std::vector<int>& subset)
{
    std::vector<char> in(mesh.vertex_count(), 0);
    for (int v : subset) {
        if (v < 0 || v >= mesh.vertex_count()) throw DomainError("cut vertex out of range");
        in[v] = 1;
    }
    return in;
}

struct SideVolumes
{
    double inside = 0.0;
    double outside = 0.0;
};

SideVolumes side_volumes(const DiscreteManifold& mesh, const std::vector<char>& in)
{
    SideVolumes s;
    for (int v = 0; v < mesh.vertex_count(); ++v) (in[v] ? s.inside : s.outside) += mesh.vertex_volumes()[v];
    return s;
}

double edge_order_boundary(const DiscreteManifold& mesh, const std::vector<double>& dual, const std::vector<char>& in)
{
    double b = 0.0;
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (in[mesh.edges()[e][0]] != in[mesh.edges()[e][1]]) b += dual[e];
    }
    return b;
}

/// Cut on the smaller-volume side of the partition (in, not in).
Cut smaller_side(const DiscreteManifold& mesh, const std::vector<double>& dual, std::vector<char> in)
{
    SideVolumes vols = side_volumes(mesh, in);
    if (vols.inside > vols.outside) {
        for (auto& flag : in) flag = !flag;
        std::swap(vols.inside, vols.outside);
    }
    Cut cut;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (in[v]) cut.vertices.push_back(v);
    }
    cut.boundary = edge_order_boundary(mesh, dual, in);
    cut.volume = vols.inside;
    cut.complement_volume = vols.outside;
    return cut;
}

double weighted_primitive(double r, double scale)
{
    const double s = 7.0 * scale * scale;
    return -0.5 * s * std::exp(-r * r / s);
}

/// Unit combinations of a degenerate eigenspace that minimise the mass-weighted
/// fourth moment, one descent per basis vector. Pure modes have the smallest
/// fourth moment, so this undoes the arbitrary rotation a solver returns.
std::vector<Eigen::VectorXd> low_kurtosis_fields(const Eigen::MatrixXd& basis, const std::vector<double>& vol)
{
    const int d = static_cast<int>(basis.cols());
    const Eigen::Map<const Eigen::VectorXd> mass(vol.data(), static_cast<Eigen::Index>(vol.size()));
    auto moment = [&](const Eigen::VectorXd& c) { return mass.dot((basis * c).array().pow(4).matrix()); };
    std::vector<Eigen::VectorXd> out;
    for (int start = 0; start < d; ++start) {
        Eigen::VectorXd c = Eigen::VectorXd::Unit(d, start);
        double value = moment(c);
        double step = 1.0;
        for (int it = 0; it < 200 && step > 1e-10; ++it) {
            const Eigen::VectorXd f = basis * c;
            Eigen::VectorXd grad = 4.0 * basis.transpose() * (mass.array() * f.array().cube()).matrix();
            grad -= grad.dot(c) * c;
            if (grad.norm() < 1e-12 * std::max(1.0, value)) break;
            const Eigen::VectorXd trial = (c - step * grad / grad.norm()).normalized();
            const double trial_value = moment(trial);
            if (trial_value < value) {
                c = trial;
                value = trial_value;
                step *= 1.5;
            } else {
                step *= 0.5;
            }
        }
        out.push_back(basis * c);
    }
    return out;
}

} // namespace

DualEdgeLengths dual_edge_lengths(const DiscreteManifold& mesh)
{
    const auto w = cotangent_weights(mesh);
    DualEdgeLengths out;
    out.lengths.resize(w.size());
    for (size_t e = 0; e < w.size(); ++e) {
        const double length = mesh.edge_lengths()[e];
        if (w[e] < 0.0) {
            out.lengths[e] = length / 10.0;
            ++out.floored_count;
        } else {
            out.lengths[e] = w[e] * length;
        }
    }
    return out;
}

CutMeasure cut_boundary_measure(const DiscreteManifold& mesh, const std::vector<int>& subset)
{
    const auto in = membership(mesh, subset);
    const int inside = static_cast<int>(std::count(in.begin(), in.end(), 1));
    if (inside == 0 || inside == mesh.vertex_count()) throw DomainError("cut must be a nonempty proper subset");
    const auto w = cotangent_weights(mesh);
    CutMeasure m;
    for (int e = 0; e < mesh.edge_count(); ++e) {
        if (in[mesh.edges()[e][0]] == in[mesh.edges()[e][1]]) continue;
        const double length = mesh.edge_lengths()[e];
        ++m.crossing_edges;
        m.proxy += length / 3.0;
        if (w[e] < 0.0) {
            m.dual += length / 10.0;
            ++m.floored_edges;
        } else {
            m.dual += w[e] * length;
        }
    }
    return m;
}

Cut make_cut(const DiscreteManifold& mesh, const std::vector<int>& subset)
{
    const auto in = membership(mesh, subset);
    const int inside = static_cast<int>(std::count(in.begin(), in.end(), 1));
    if (inside == 0 || inside == mesh.vertex_count()) throw DomainError("cut must be a nonempty proper subset");
    const auto dual = dual_edge_lengths(mesh).lengths;
    Cut cut;
    for (int v = 0; v < mesh.vertex_count(); ++v) {
        if (in[v]) cut.vertices.push_back(v);
    }
    const SideVolumes vols = side_volumes(mesh, in);
    cut.boundary = edge_order_boundary(mesh, dual, in);
    cut.volume = vols.inside;
    cut.complement_volume = vols.outside;
    return cut;
}

double isoperimetric_ratio(double boundary, double volume, double exponent)
{
    if (!(volume > 0.0)) throw DomainError("cut volume must be positive");
    if (std::isinf(exponent)) return boundary / volume;
    if (!(exponent > 1.0)) throw DomainError("isoperimetric exponent p must exceed 1");
    return boundary / std::pow(volume, 1.0 - 1.0 / exponent);
}

IsoperimetryResult cheeger_exact(const DiscreteManifold& mesh)
{
    const int n = mesh.vertex_count();
    if (n < cheeger_exact_min_vertices) throw DomainError("exhaustive Cheeger needs at least 4 vertices");
    if (n > cheeger_exact_max_vertices) throw DomainError("exhaustive Cheeger is capped at 22 vertices");
    const auto dual = dual_edge_lengths(mesh).lengths;
    const auto& vol = mesh.vertex_volumes();

    // The last vertex always stays outside, so each partition is visited once.
    const std::uint32_t masks = 1u << (n - 1);
    std::vector<char> in(n, 0);
    double best = std::numeric_limits<double>::infinity();
    std::uint32_t best_mask = 0;
    for (std::uint32_t mask = 1; mask < masks; ++mask) {
        for (int v = 0; v < n; ++v) in[v] = static_cast<char>((mask >> v) & 1u);
        double inside = 0.0, outside = 0.0;
        for (int v = 0; v < n; ++v) (in[v] ? inside : outside) += vol[v];
        const double ratio = edge_order_boundary(mesh, dual, in) / std::min(inside, outside);
        if (ratio < best) {
            best = ratio;
            best_mask = mask;
        }
    }
    for (int v = 0; v < n; ++v) in[v] = static_cast<char>((best_mask >> v) & 1u);
    IsoperimetryResult out;
    out.witness = smaller_side(mesh, dual, in);
    out.value = best;
    out.exponent = cheeger_exponent;
    out.exactness = Exactness::exact;
    return out;
}

IsoperimetryResult isoperimetric_sweep(const DiscreteManifold& mesh, const SpectralDecomposition& spec, double exponent, int fields)
{
    const int n = mesh.vertex_count();
    if (spec.source != SpectrumSource::mesh || spec.vertex_count() != n) throw DomainError("sweep needs the mesh's own spectrum");
    if (!spec.label.empty() && spec.label != mesh.label()) throw DomainError("spectrum belongs to '" + spec.label + "'");
    if (fields < 1) throw DomainError("sweep needs at least one field");
    if (spec.mode_count() < 2) throw DomainError("sweep needs at least one nonconstant eigenfunction");
    if (!std::isinf(exponent) && !(exponent > 1.0)) throw DomainError("isoperimetric exponent p must exceed 1");
    const auto dual = dual_edge_lengths(mesh).lengths;
    const auto& vol = mesh.vertex_volumes();
    const double total = mesh.total_volume();
    const int used = std::min(fields, spec.mode_count() - 1);

    std::vector<Eigen::VectorXd> fields_used;
    for (int j = 1; j <= used; ++j) fields_used.push_back(spec.eigenfunctions.col(j));
    for (int j = 1; j <= used;) {
        int end = j + 1;
        const double lambda = spec.eigenvalues[j];
        while (end < spec.mode_count() && spec.eigenvalues[end] - lambda <= 1e-6 * std::max(1.0, lambda)) ++end;
        if (end - j > 1) {
            for (auto& f : low_kurtosis_fields(spec.eigenfunctions.middleCols(j, end - j), vol)) fields_used.push_back(std::move(f));
        }
        j = end;
    }

    double best = std::numeric_limits<double>::infinity();
    int best_field = 0, best_prefix = 1;
    std::vector<std::vector<int>> orders(fields_used.size());
    for (size_t j = 0; j < fields_used.size(); ++j) {
        const Eigen::VectorXd& phi = fields_used[j];
        std::vector<int>& order = orders[j];
        order.resize(n);
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return phi[a] < phi[b]; });

        std::vector<char> in(n, 0);
        double boundary = 0.0, inside = 0.0;
        for (int k = 0; k < n - 1; ++k) {
            const int v = order[k];
            in[v] = 1;
            inside += vol[v];
            for (const auto& [u, e] : mesh.neighbors(v)) boundary += in[u] ? -dual[e] : dual[e];
            const double smaller = std::min(inside, total - inside);
            if (!(smaller > 0.0)) continue;
            const double ratio = isoperimetric_ratio(std::max(boundary, 0.0), smaller, exponent);
            if (ratio < best) {
                best = ratio;
                best_field = static_cast<int>(j);
                best_prefix = k + 1;
            }
        }
    }

    std::vector<char> in(n, 0);
    for (int k = 0; k < best_prefix; ++k) in[orders[best_field][k]] = 1;
    IsoperimetryResult out;
    out.witness = smaller_side(mesh, dual, in);
    out.exponent = exponent;
    out.value = isoperimetric_ratio(out.witness.boundary, out.witness.volume, exponent);
    out.exactness = Exactness::sweep_upper_bound;
    return out;
}

IsoperimetryResult cheeger_sweep(const DiscreteManifold& mesh, const SpectralDecomposition& spec, int fields)
{
    return isoperimetric_sweep(mesh, spec, cheeger_exponent, fields);
}

double ball_average(const DiscreteManifold& mesh, const ScalarField& field, int x, double r)
{
    if (field.size() != mesh.vertex_count()) throw DomainError("field does not match the mesh");
    const auto ball = ball_indicator(geodesic_distances(mesh, x), r);
    double q = 0.0, v = 0.0;
    for (int u : ball) {
        q += field[u] * mesh.vertex_volumes()[u];
        v += mesh.vertex_volumes()[u];
    }
    return q / v;
}

double geometric_kato_integral(
    const DiscreteManifold& mesh,
    const DistanceField& dist,
    const ScalarField& q,
    double scale,
    bool weighted,
    double upper_limit)
{
    const int n = mesh.vertex_count();
    if (q.size() != n || static_cast<int>(dist.distance.size()) != n) throw DomainError("field does not match the mesh");
    if (weighted && !(scale > 0.0)) throw DomainError("scale R must be positive");
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return dist.distance[a] < dist.distance[b]; });

    auto primitive = [&](double r) { return weighted ? weighted_primitive(r, scale) : 0.5 * r * r; };
    double integral = 0.0, mass_q = 0.0, mass_v = 0.0;
    for (int k = 0; k < n; ++k) {
        const int v = order[k];
        mass_q += q[v] * mesh.vertex_volumes()[v];
        mass_v += mesh.vertex_volumes()[v];
        const double a = dist.distance[v];
        if (a >= upper_limit) break;
        // The ball is constant on [a, b): b is the next distinct distance.
        if (k + 1 < n && dist.distance[order[k + 1]] == a) continue;
        const double b = k + 1 < n ? std::min(dist.distance[order[k + 1]], upper_limit) : upper_limit;
        integral += (mass_q / mass_v) * (primitive(b) - primitive(a));
    }
    return integral;
}

FunctionalResult geometric_kato_functional(
    const DiscreteManifold& mesh,
    const ScalarField& q,
    double scale,
    bool weighted,
    double upper_limit)
{
    const int n = mesh.vertex_count();
    if (q.size() != n) throw DomainError("field does not match the mesh");
    for (Eigen::Index i = 0; i < q.size(); ++i) {
        if (q[i] < 0.0) throw DomainError("potential is negative at vertex " + std::to_string(i));
    }
    if (weighted && !(scale > 0.0)) throw DomainError("scale R must be positive");
    FunctionalResult out;
    out.upper_limit = upper_limit >= 0.0 ? upper_limit : diameter(mesh).value;
    std::vector<double> values(n);
    parallel_for(n, [&](int x) {
        values[x] = geometric_kato_integral(mesh, geodesic_distances(mesh, x), q, scale, weighted, out.upper_limit);
    });
    out.value = values[0];
    for (int x = 1; x < n; ++x) {
        if (values[x] > out.value) {
            out.value = values[x];
            out.argmax = x;
        }
    }
    return out;
}

} // namespace specgeo
