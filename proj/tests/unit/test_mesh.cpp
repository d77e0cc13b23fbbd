#include "specgeo/errors.hpp"
#include "specgeo/manifold.hpp"
#include "specgeo/model.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace specgeo;
using doctest::Approx;

namespace {

const std::string data_dir = SPECGEO_TEST_DATA;

double defect_sum(const DiscreteManifold& mesh)
{
    double s = 0.0;
    for (double d : angle_defects(mesh)) s += d;
    return s;
}

} // namespace

TEST_CASE("octahedron loads with the expected combinatorics and metric")
{
    const auto mesh = load_mesh(data_dir + "/octahedron.off");
    CHECK(mesh.vertex_count() == 6);
    CHECK(mesh.edge_count() == 12);
    CHECK(mesh.face_count() == 8);
    CHECK(mesh.euler_characteristic() == 2);
    // Eight equilateral faces of side sqrt(2).
    CHECK(mesh.total_volume() == Approx(8.0 * std::sqrt(3.0) / 4.0 * 2.0).epsilon(1e-14));
    for (double l : mesh.edge_lengths()) CHECK(l == Approx(std::sqrt(2.0)).epsilon(1e-14));
    for (double d : angle_defects(mesh)) CHECK(d == Approx(2.0 * std::numbers::pi / 3.0).epsilon(1e-13));
}

TEST_CASE("Gauss-Bonnet holds for every generator")
{
    for (const auto& mesh : {make_icosphere(2, 1.0), make_icosphere(1, 3.0), make_bumpy_sphere(3, 0.3, 4, 7)}) {
        CHECK(defect_sum(mesh) == Approx(4.0 * std::numbers::pi).epsilon(1e-11));
    }
    CHECK(std::abs(defect_sum(make_flat_torus_mesh(2.0 * std::numbers::pi, 3.0, 8, 6))) < 1e-11);
}

TEST_CASE("curvature integrates to the defect sum and vanishes on the flat torus")
{
    const auto mesh = make_bumpy_sphere(3, 0.3, 4, 7);
    const auto rho = curvature_lowest(mesh);
    double integral = 0.0;
    for (int v = 0; v < mesh.vertex_count(); ++v) integral += rho[v] * mesh.vertex_volumes()[v];
    CHECK(integral == Approx(4.0 * std::numbers::pi).epsilon(1e-11));
    CHECK(rho.values.minCoeff() < 0.0);

    const auto torus = make_flat_torus_mesh(2.0 * std::numbers::pi, 2.0 * std::numbers::pi, 16, 16);
    CHECK(curvature_lowest(torus).values.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("icosphere vertex counts and curvature near 1")
{
    for (int s = 0; s <= 3; ++s) {
        const auto mesh = make_icosphere(s, 1.0);
        const int expected = 10 * (1 << (2 * s)) + 2;
        CHECK(mesh.vertex_count() == expected);
    }
    const auto rho = curvature_lowest(make_icosphere(4, 1.0));
    CHECK(rho.values.minCoeff() > 0.95);
    CHECK(rho.values.maxCoeff() < 1.2);
}

TEST_CASE("metric scaling multiplies volume by s^2 and divides curvature by s^2")
{
    const auto mesh = make_icosphere(2, 1.0);
    const auto big = mesh.scaled(3.0);
    CHECK(big.total_volume() == Approx(9.0 * mesh.total_volume()).epsilon(1e-13));
    const auto rho = curvature_lowest(mesh);
    const auto rho_big = curvature_lowest(big);
    for (int v = 0; v < mesh.vertex_count(); ++v) CHECK(rho_big[v] == Approx(rho[v] / 9.0).epsilon(1e-12));
    CHECK(diameter(big).value == Approx(3.0 * diameter(mesh).value).epsilon(1e-13));
    CHECK_THROWS_AS(mesh.scaled(0.0), DomainError);
}

TEST_CASE("first Betti number by exact elimination")
{
    CHECK(betti_one(make_icosphere(3, 1.0)) == 0);
    CHECK(betti_one(make_flat_torus_mesh(1.0, 1.0, 5, 4)) == 2);
    CHECK(betti_one(load_mesh(data_dir + "/octahedron.off")) == 0);
    CHECK(exact_rank({{{0, 1}, {1, -1}}, {{1, 1}, {2, -1}}, {{0, 1}, {2, -1}}}) == 2);
    CHECK(exact_rank({{{0, 2}, {1, 4}}, {{0, 3}, {1, 6}}}) == 1);
}

TEST_CASE("graph distances on the octahedron")
{
    const auto mesh = load_mesh(data_dir + "/octahedron.off");
    const auto d = geodesic_distances(mesh, 0);
    CHECK(d.distance[0] == 0.0);
    CHECK(d.distance[1] == Approx(2.0 * std::sqrt(2.0)));
    for (int v : {2, 3, 4, 5}) CHECK(d.distance[v] == Approx(std::sqrt(2.0)));
    CHECK(eccentricity(d) == Approx(2.0 * std::sqrt(2.0)));
    const auto res = diameter(mesh);
    CHECK(res.exact);
    CHECK(res.value == Approx(2.0 * std::sqrt(2.0)));
    CHECK(ball_indicator(d, 1.5) == std::vector<int>{0, 2, 3, 4, 5});
}

TEST_CASE("graph diameter over-approximates the geodesic one within 8% on icosphere(4)")
{
    const double d = diameter(make_icosphere(4, 1.0)).value;
    CHECK(d >= std::numbers::pi);
    CHECK(d <= 1.08 * std::numbers::pi);
}

TEST_CASE("mesh validation errors")
{
    CHECK_THROWS_AS(load_mesh(data_dir + "/open_tetra.off"), MeshError);
    CHECK_THROWS_AS(load_mesh(data_dir + "/does_not_exist.off"), MeshError);
    CHECK_THROWS_AS(DiscreteManifold::from_positions({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}}, {{0, 1, 1}}, "bad"), MeshError);
    try {
        load_mesh(data_dir + "/open_tetra.off");
    } catch (const MeshError& e) {
        CHECK(std::string(e.what()).find("open surface") != std::string::npos);
        CHECK(e.element() >= 0);
    }
}

TEST_CASE("OBJ reader skips non-geometry records with warnings")
{
    std::vector<std::string> warnings;
    const auto mesh = load_mesh(data_dir + "/tetra.obj", &warnings);
    CHECK(mesh.vertex_count() == 4);
    CHECK(mesh.face_count() == 4);
    CHECK(mesh.euler_characteristic() == 2);
    CHECK(warnings.size() >= 2);
}

TEST_CASE("OFF round trip preserves the metric")
{
    const auto mesh = make_bumpy_sphere(2, 0.2, 3, 11);
    const auto path = std::filesystem::temp_directory_path() / "specgeo_roundtrip.off";
    save_off(mesh, path);
    const auto back = load_mesh(path);
    REQUIRE(back.edge_count() == mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) CHECK(back.edge_lengths()[e] == Approx(mesh.edge_lengths()[e]).epsilon(1e-12));
    std::filesystem::remove(path);
}

TEST_CASE("flat torus metric is the quotient metric, not the embedding")
{
    const double lx = 2.0, ly = 3.0;
    const auto torus = make_flat_torus_mesh(lx, ly, 6, 5);
    CHECK(torus.total_volume() == Approx(lx * ly).epsilon(1e-13));
    CHECK(torus.euler_characteristic() == 0);
    CHECK(connected_components(torus) == 1);
    CHECK_THROWS_AS(make_flat_torus_mesh(1.0, 1.0, 2, 5), DomainError);
}

TEST_CASE("negative part")
{
    const ScalarField f{Eigen::Vector3d(-1.5, 0.0, 2.0), "x"};
    const auto g = negative_part(f);
    CHECK(g[0] == 1.5);
    CHECK(g[1] == 0.0);
    CHECK(g[2] == 0.0);
    CHECK(g.label == "x");
}

TEST_CASE("model manifolds: closed-form spectra and invariants")
{
    const auto s2 = make_sphere_model(2, 1.0, 9);
    REQUIRE(s2.eigenvalues.size() >= 9);
    const double expected[] = {0, 2, 2, 2, 6, 6, 6, 6, 6};
    for (int i = 0; i < 9; ++i) CHECK(s2.eigenvalues[i] == expected[i]);

    const auto s3 = make_sphere_model(3, 2.0, 5);
    CHECK(s3.eigenvalues[1] == Approx(3.0 / 4.0));
    CHECK(s3.ricci_lowest() == Approx(2.0 / 4.0));
    CHECK(s3.diameter() == Approx(2.0 * std::numbers::pi));
    CHECK(s3.total_volume == Approx(2.0 * std::numbers::pi * std::numbers::pi * 8.0));

    const auto t2 = make_torus_model({2.0 * std::numbers::pi, 2.0 * std::numbers::pi}, 9);
    const double torus_expected[] = {0, 1, 1, 1, 1, 2, 2, 2, 2};
    for (int i = 0; i < 9; ++i) CHECK(t2.eigenvalues[i] == Approx(torus_expected[i]).epsilon(1e-14));
    CHECK(t2.ricci_lowest() == 0.0);
    CHECK(t2.diameter() == Approx(std::sqrt(2.0) * std::numbers::pi));

    const auto m = parse_model_config("kind = sphere\ndim = 3\nradius = 1\nmodes = 10\n");
    CHECK(m.dimension == 3);
    CHECK(m.eigenvalues[1] == 3.0);
    CHECK_THROWS_AS(parse_model_config("kind = cube\n"), ConfigError);
    CHECK_THROWS_AS(make_sphere_model(3, -1.0, 4), DomainError);
}
