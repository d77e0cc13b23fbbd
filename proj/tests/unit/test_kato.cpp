#include "specgeo/errors.hpp"
#include "specgeo/kato.hpp"
#include "specgeo/rng.hpp"

#include <Eigen/Dense>
#include <doctest.h>

#include <cmath>

using namespace specgeo;
using doctest::Approx;

namespace {

struct Fixture
{
    DiscreteManifold mesh = make_bumpy_sphere(2, 0.3, 3, 2);
    LaplaceOperator op = assemble(mesh);
    SpectralDecomposition spec = decompose(op, {.mode_count = mesh.vertex_count()});

    ScalarField random_potential(std::uint64_t seed) const
    {
        Rng rng(seed);
        Eigen::VectorXd v(mesh.vertex_count());
        for (int i = 0; i < v.size(); ++i) v[i] = rng.uniform() * rng.uniform() * 3.0;
        return mesh.make_field(v);
    }
};

/// Composite Simpson rule in t of the heat flow, independent of the closed-form time integral.
Eigen::VectorXd simpson_profile(const SpectralDecomposition& spec, const ScalarField& v, double horizon, int panels)
{
    const double h = horizon / panels;
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(v.size());
    for (int i = 0; i <= panels; ++i) {
        const double w = (i == 0 || i == panels) ? 1.0 : (i % 2 ? 4.0 : 2.0);
        const Eigen::VectorXd p = i == 0 ? v.values : heat_apply(spec, v, i * h).field.values;
        acc += w * p;
    }
    return acc * h / 3.0;
}

} // namespace

TEST_CASE("time integral of exp(-lambda t)")
{
    CHECK(heat_time_integral(0.0, 2.5) == 2.5);
    CHECK(heat_time_integral(2.0, 1.0) == Approx((1.0 - std::exp(-2.0)) / 2.0).epsilon(1e-15));
    CHECK(heat_time_integral(1e-14, 1.0) == Approx(1.0).epsilon(1e-13));
}

TEST_CASE("Kato profile equals the time quadrature of the heat flow")
{
    Fixture fx;
    const auto v = fx.random_potential(11);
    const double horizon = 0.7;
    const Eigen::VectorXd closed = kato_profile(fx.spec, v, horizon);
    const Eigen::VectorXd quad = simpson_profile(fx.spec, v, horizon, 4000);
    CHECK((closed - quad).cwiseAbs().maxCoeff() < 1e-6 * quad.cwiseAbs().maxCoeff());

    const auto k = kato_constant(fx.spec, v, horizon);
    Eigen::Index arg = 0;
    CHECK(k.value == Approx(closed.maxCoeff(&arg)).epsilon(1e-14));
    CHECK(k.argmax == arg);
    CHECK(k.truncation == 0.0);
}

TEST_CASE("constant potentials: kappa = cT and c_L = c/L")
{
    Fixture fx;
    for (double c : {0.5, 1.0, 2.0}) {
        const auto v = fx.mesh.make_field(Eigen::VectorXd::Constant(fx.mesh.vertex_count(), c));
        for (double t : {0.5, 1.0, 2.0}) {
            CHECK(std::abs(kato_constant(fx.spec, v, t).value - c * t) <= 1e-10);
            CHECK(kato_constant(fx.spec, c, t).value == c * t);
        }
        for (double l : {0.5, 1.0, 2.0}) {
            CHECK(std::abs(resolvent_constant(fx.spec, v, l).value - c / l) <= 1e-10);
            CHECK(resolvent_constant(fx.spec, c, l).value == c / l);
        }
    }
}

TEST_CASE("resolvent constant equals the max of a direct sparse solve")
{
    Fixture fx;
    const auto v = fx.random_potential(4);
    const double shift = 0.8;
    const Eigen::MatrixXd system = Eigen::MatrixXd(fx.op.stiffness) + shift * Eigen::MatrixXd(fx.op.mass.asDiagonal());
    const Eigen::VectorXd u = system.ldlt().solve(fx.op.mass.cwiseProduct(v.values));
    CHECK(resolvent_constant(fx.spec, v, shift).value == Approx(u.maxCoeff()).epsilon(1e-9));
}

TEST_CASE("bracketing inequality on random potentials")
{
    Fixture fx;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const auto v = fx.random_potential(100 + seed);
        for (double l : {0.5, 2.0}) {
            for (double t : {0.1, 1.0}) {
                const auto gap = bracketing_gap(fx.spec, v, t, l);
                CHECK(gap.lower_slack >= -1e-10);
                CHECK(gap.upper_slack >= -1e-10);
            }
        }
    }
}

TEST_CASE("semigroup lower bound inverts kappa = 1 - exp(-beta T)")
{
    const double beta = semigroup_lower_bound(0.3, 2.0);
    CHECK(1.0 - std::exp(-beta * 2.0) == Approx(0.3).epsilon(1e-14));
    CHECK(semigroup_lower_bound(0.0, 1.0) == 0.0);
    CHECK_THROWS_AS(semigroup_lower_bound(1.0, 1.0), DomainError);
    CHECK_THROWS_AS(semigroup_lower_bound(0.5, 0.0), DomainError);
}

TEST_CASE("first threshold agrees with a fine T-grid scan")
{
    Fixture fx;
    const auto rho = curvature_lowest(fx.mesh);
    auto v = negative_part(rho);
    REQUIRE(v.values.maxCoeff() > 0.0);
    const double target = 0.05;
    const auto t = kato_first_threshold(fx.spec, v, target, 50.0);
    CHECK_FALSE(t.capped);
    CHECK(t.kato_at_horizon <= target);
    // Scan: the last grid point below target must sit within the bisection tolerance of T*.
    double last_below = 0.0;
    for (int i = 1; i <= 20000; ++i) {
        const double h = 50.0 * i / 20000.0;
        if (kato_constant(fx.spec, v, h).value <= target) last_below = h;
        else break;
    }
    CHECK(std::abs(t.horizon - last_below) <= 50.0 / 20000.0 + 1e-6 * t.horizon);
}

TEST_CASE("threshold reports the cap when kappa never reaches the target")
{
    Fixture fx;
    const auto zero = fx.mesh.make_field(Eigen::VectorXd::Zero(fx.mesh.vertex_count()));
    const auto t = kato_first_threshold(fx.spec, zero, 0.1, 7.0);
    CHECK(t.capped);
    CHECK(t.horizon == 7.0);
}

TEST_CASE("Kato constant is monotone in T and rejects bad potentials")
{
    Fixture fx;
    const auto v = fx.random_potential(9);
    double prev = 0.0;
    for (double t : {0.01, 0.1, 0.5, 1.0, 3.0}) {
        const double k = kato_constant(fx.spec, v, t).value;
        CHECK(k >= prev);
        prev = k;
    }
    Eigen::VectorXd bad = v.values;
    bad[3] = -0.1;
    CHECK_THROWS_AS(kato_constant(fx.spec, fx.mesh.make_field(bad), 1.0), DomainError);
    CHECK_THROWS_AS(kato_constant(fx.spec, v, 0.0), DomainError);
    CHECK_THROWS_AS(resolvent_constant(fx.spec, v, -1.0), DomainError);
}

TEST_CASE("truncated spectrum reports a truncation indicator")
{
    Fixture fx;
    const auto partial = decompose(fx.op, {.mode_count = 20});
    const auto v = fx.random_potential(2);
    const auto k = kato_constant(partial, v, 1.0);
    CHECK(k.truncation > 0.0);
    CHECK(k.truncation < 1.0);
}

TEST_CASE("series table")
{
    Fixture fx;
    const auto v = fx.random_potential(1);
    const std::string s = kato_series(fx.spec, v, {0.5, 1.0});
    CHECK(s.rfind("T\tkappa\n", 0) == 0);
    CHECK(std::count(s.begin(), s.end(), '\n') == 3);
}
