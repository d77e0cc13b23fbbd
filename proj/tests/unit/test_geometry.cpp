#include "specgeo/errors.hpp"
#include "specgeo/geometry.hpp"

#include <Eigen/Geometry>
#include <doctest.h>

#include <cmath>
#include <functional>
#include <numbers>

using namespace specgeo;
using doctest::Approx;

namespace {

const std::string data_dir = SPECGEO_TEST_DATA;

/// Dual lengths from embedded positions: cotangents via dot and cross products.
std::vector<double> embedded_dual_lengths(const DiscreteManifold& mesh)
{
    std::vector<double> w(mesh.edge_count(), 0.0);
    for (const auto& f : mesh.faces()) {
        for (int c = 0; c < 3; ++c) {
            const Eigen::Vector3d& p = mesh.positions()[f[c]];
            const Eigen::Vector3d a = mesh.positions()[f[(c + 1) % 3]] - p;
            const Eigen::Vector3d b = mesh.positions()[f[(c + 2) % 3]] - p;
            const double cot = a.dot(b) / a.cross(b).norm();
            w[mesh.find_edge(f[(c + 1) % 3], f[(c + 2) % 3])] += 0.5 * cot;
        }
    }
    std::vector<double> out(w.size());
    for (size_t e = 0; e < w.size(); ++e) {
        const double l = mesh.edge_lengths()[e];
        out[e] = w[e] < 0.0 ? l / 10.0 : w[e] * l;
    }
    return out;
}

/// Recursive include/exclude enumeration of every proper subset.
double enumerate_cheeger(const DiscreteManifold& mesh, const std::vector<double>& dual)
{
    const int n = mesh.vertex_count();
    std::vector<char> in(n, 0);
    double best = std::numeric_limits<double>::infinity();
    std::function<void(int)> rec = [&](int v) {
        if (v == n) {
            double inside = 0.0, outside = 0.0;
            for (int u = 0; u < n; ++u) (in[u] ? inside : outside) += mesh.vertex_volumes()[u];
            if (inside == 0.0 || outside == 0.0) return;
            double b = 0.0;
            for (int e = 0; e < mesh.edge_count(); ++e) {
                if (in[mesh.edges()[e][0]] != in[mesh.edges()[e][1]]) b += dual[e];
            }
            best = std::min(best, b / std::min(inside, outside));
            return;
        }
        in[v] = 0;
        rec(v + 1);
        in[v] = 1;
        rec(v + 1);
        in[v] = 0;
    };
    rec(0);
    return best;
}

} // namespace

TEST_CASE("dual edge lengths agree with the embedded cotangent formula")
{
    for (const auto& mesh : {load_mesh(data_dir + "/octahedron.off"), make_bumpy_sphere(2, 0.4, 5, 3)}) {
        const auto ours = dual_edge_lengths(mesh);
        const auto ref = embedded_dual_lengths(mesh);
        for (int e = 0; e < mesh.edge_count(); ++e) CHECK(ours.lengths[e] == Approx(ref[e]).epsilon(1e-11));
    }
}

TEST_CASE("cut boundary measures")
{
    const auto torus = make_flat_torus_mesh(1.0, 1.0, 4, 4);
    const auto m = cut_boundary_measure(torus, {0});
    CHECK(m.dual == Approx(4.0 * 0.25));
    CHECK(m.crossing_edges == 6);
    CHECK(m.proxy > 0.0);
    CHECK(m.floored_edges == 0);
    CHECK_THROWS_AS(cut_boundary_measure(torus, {}), DomainError);
}

TEST_CASE("exhaustive Cheeger equals the independent enumerator")
{
    std::vector<DiscreteManifold> meshes{load_mesh(data_dir + "/octahedron.off"), load_mesh(data_dir + "/tetra.obj"),
                                         make_icosphere(0, 1.0), make_flat_torus_mesh(1.0, 1.0, 4, 4)};
    for (const auto& mesh : meshes) {
        const auto exact = cheeger_exact(mesh);
        CHECK(exact.value == enumerate_cheeger(mesh, dual_edge_lengths(mesh).lengths));
        CHECK(exact.exactness == Exactness::exact);
        CHECK(exact.witness.volume <= exact.witness.complement_volume);
        CHECK(exact.value == Approx(exact.witness.boundary / exact.witness.volume).epsilon(1e-14));
    }
}

TEST_CASE("sweep is an upper bound on the exact value")
{
    for (const auto& mesh : {load_mesh(data_dir + "/octahedron.off"), make_icosphere(0, 1.0), make_flat_torus_mesh(1.0, 1.0, 4, 4)}) {
        const auto spec = decompose(assemble(mesh), {.mode_count = mesh.vertex_count()});
        CHECK(cheeger_sweep(mesh, spec).value >= cheeger_exact(mesh).value - 1e-14);
    }
}

TEST_CASE("flat torus sweep recovers the band cut 2/pi")
{
    const double l = 2.0 * std::numbers::pi;
    const auto torus = make_flat_torus_mesh(l, l, 32, 32);
    const auto spec = decompose(assemble(torus), {.mode_count = 10});
    const auto h = cheeger_sweep(torus, spec);
    CHECK(h.value == Approx(2.0 / std::numbers::pi).epsilon(1e-9));
    CHECK(h.exactness == Exactness::sweep_upper_bound);
}

TEST_CASE("isoperimetric ratio and p-sweep")
{
    CHECK(isoperimetric_ratio(2.0, 4.0, cheeger_exponent) == 0.5);
    CHECK(isoperimetric_ratio(2.0, 4.0, 2.0) == Approx(1.0));
    CHECK_THROWS_AS(isoperimetric_ratio(1.0, 1.0, 1.0), DomainError);
    const auto mesh = make_icosphere(3, 1.0);
    const auto spec = decompose(assemble(mesh), {.mode_count = 10});
    const auto p2 = isoperimetric_sweep(mesh, spec, 2.0);
    CHECK(std::isfinite(p2.value));
    CHECK(p2.value > 0.0);
    CHECK_FALSE(p2.witness.vertices.empty());
    const auto huge = isoperimetric_sweep(mesh, spec, 1e12);
    CHECK(huge.value == Approx(cheeger_sweep(mesh, spec).value).epsilon(1e-9));
}

TEST_CASE("ball average of a constant and of the full ball")
{
    const auto mesh = make_bumpy_sphere(2, 0.3, 3, 1);
    const auto c = mesh.make_field(Eigen::VectorXd::Constant(mesh.vertex_count(), 2.5));
    CHECK(ball_average(mesh, c, 3, 0.4) == Approx(2.5));
    const auto x = mesh.make_field(Eigen::VectorXd::LinSpaced(mesh.vertex_count(), 0.0, 1.0));
    double mean = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) mean += x[v] * mesh.vertex_volumes()[v];
    mean /= mesh.total_volume();
    CHECK(ball_average(mesh, x, 0, 100.0) == Approx(mean).epsilon(1e-12));
}

TEST_CASE("geometric Kato functional on constants has a closed form")
{
    const auto mesh = make_bumpy_sphere(3, 0.3, 4, 7);
    const double c = 0.8, r = 0.6;
    const auto q = mesh.make_field(Eigen::VectorXd::Constant(mesh.vertex_count(), c));
    const auto un = geometric_kato_functional(mesh, q, r, false);
    const double d = un.upper_limit;
    CHECK(d == Approx(diameter(mesh).value));
    CHECK(std::abs(un.value - c * d * d / 2.0) <= 1e-10);
    const auto w = geometric_kato_functional(mesh, q, r, true);
    CHECK(std::abs(w.value - c * 3.5 * r * r * (1.0 - std::exp(-d * d / (7.0 * r * r)))) <= 1e-10);
}

TEST_CASE("geometric Kato functional: monotone in R, weighted below unweighted")
{
    const auto mesh = make_bumpy_sphere(3, 0.3, 4, 7);
    const auto q = negative_part(curvature_lowest(mesh));
    const auto un = geometric_kato_functional(mesh, q, 1.0, false);
    double prev = 0.0;
    for (double r : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2, 6.4}) {
        const auto w = geometric_kato_functional(mesh, q, r, true);
        CHECK(w.value >= prev);
        CHECK(w.value <= un.value + 1e-14);
        prev = w.value;
    }
    CHECK_THROWS_AS(geometric_kato_functional(mesh, q, 0.0, true), DomainError);
}
