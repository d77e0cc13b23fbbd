#include "specgeo/constants.hpp"
#include "specgeo/errors.hpp"
#include "specgeo/geometry.hpp"
#include "specgeo/kato.hpp"
#include "specgeo/rng.hpp"
#include "specgeo/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace specgeo {

namespace {

constexpr int band_modes = 30;
constexpr int time_grid_points = 8;
constexpr double time_grid_start = 0.01;

TheoremReport start_report(const std::string& theorem, const Subject& subject)
{
    TheoremReport r;
    r.theorem = theorem;
    r.manifold = subject.label();
    return r;
}

TheoremReport not_met(TheoremReport r, const std::string& why)
{
    r.status = Status::hypothesis_not_met;
    r.notes.push_back(why);
    return r;
}

const MeshSubject& require_mesh(const Subject& subject, const std::string& theorem)
{
    if (!subject.is_mesh()) throw DomainError(theorem + " runs on meshes only");
    return subject.mesh();
}

double first_positive(const Subject& subject)
{
    if (subject.is_mesh()) {
        const auto& spec = subject.mesh().spec;
        if (spec.mode_count() < 2) throw DomainError("need at least two modes for lambda_1");
        return spec.eigenvalues[1];
    }
    return subject.model().first_positive_eigenvalue();
}

double subject_diameter(const Subject& subject)
{
    return subject.is_mesh() ? subject.mesh().diam.value : subject.model().diameter();
}

/// Bottom of eps*Delta + rho - shift.
SchrodingerResult shifted_bottom(const Subject& subject, double epsilon, double shift)
{
    if (subject.is_mesh()) {
        const auto& m = subject.mesh();
        ScalarField q{m.rho.values.array() - shift, m.rho.label};
        return schrodinger_bottom(m.op, q, epsilon, m.spec.seed);
    }
    return schrodinger_bottom(subject.model(), subject.model().ricci_lowest() - shift, epsilon);
}

/// Largest T with kappa_T(rho_-) <= 1/(16 n), capped at 10 D^2.
ThresholdResult curvature_horizon(const MeshSubject& m, int n)
{
    const double cap = 10.0 * m.diam.value * m.diam.value;
    return kato_first_threshold(m.spec, negative_part(m.rho), 1.0 / (16.0 * n), cap);
}

std::vector<double> log_time_grid(double upper)
{
    std::vector<double> grid(time_grid_points);
    const double hi = std::max(upper, time_grid_start);
    for (int i = 0; i < time_grid_points; ++i) {
        grid[i] = time_grid_start * std::pow(hi / time_grid_start, i / (time_grid_points - 1.0));
    }
    return grid;
}

double mass_l1(const Eigen::VectorXd& mass, const Eigen::VectorXd& f) { return mass.dot(f.cwiseAbs()); }

void record_horizon(TheoremReport& r, const ThresholdResult& h, double kappa_target)
{
    r.hypothesis["kato_target"] = kappa_target;
    r.hypothesis["T"] = h.horizon;
    r.hypothesis["kappa_T"] = h.kato_at_horizon;
    r.hypothesis["T_capped"] = h.capped ? 1.0 : 0.0;
}

} // namespace

std::string to_string(Status status)
{
    switch (status) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::report_only: return "report-only";
    case Status::hypothesis_not_met: return "hypothesis-not-met";
    }
    return "unknown";
}

int severity(Status status)
{
    switch (status) {
    case Status::pass: return 0;
    case Status::report_only: return 1;
    case Status::hypothesis_not_met: return 2;
    case Status::fail: return 3;
    }
    return 3;
}

const std::string& Subject::label() const { return is_mesh() ? mesh().mesh.label() : model().label; }

int Subject::dimension() const { return is_mesh() ? 2 : model().dimension; }

Subject prepare(const DiscreteManifold& mesh, int mode_count, std::uint64_t seed)
{
    auto m = std::make_shared<MeshSubject>(MeshSubject{mesh, assemble(mesh), {}, curvature_lowest(mesh), diameter(mesh)});
    m->spec = decompose(m->op, DecomposeOptions{.mode_count = std::min(mode_count, mesh.vertex_count()), .seed = seed});
    return Subject{std::shared_ptr<const MeshSubject>(std::move(m))};
}

Subject prepare(const ModelManifold& model) { return Subject{model}; }

ScalarField band_limited_field(const SpectralDecomposition& spec, int modes, std::uint64_t seed, const std::string& label)
{
    if (spec.source != SpectrumSource::mesh) throw DomainError("band-limited fields need a mesh spectrum");
    const int used = std::min(modes, spec.mode_count() - 1);
    Rng rng(seed);
    Eigen::VectorXd values = Eigen::VectorXd::Zero(spec.vertex_count());
    for (int i = 1; i <= used; ++i) values += rng.normal() * spec.eigenfunctions.col(i);
    return ScalarField{std::move(values), label};
}

double ZonalS3Function::value(double cos_theta) const
{
    const double c = std::clamp(cos_theta, -1.0, 1.0);
    // Chebyshev polynomials of the second kind: U_k(cos t) = sin((k+1) t) / sin t.
    double u_prev = 0.0, u = 1.0, sum = 0.0;
    for (size_t k = 0; k < coefficients.size(); ++k) {
        sum += coefficients[k] * u;
        const double next = 2.0 * c * u - u_prev;
        u_prev = u;
        u = next;
    }
    return sum;
}

double ZonalS3Function::l2_squared() const
{
    double s = 0.0;
    for (double a : coefficients) s += a * a;
    return s;
}

double ZonalS3Function::dirichlet_energy() const
{
    double s = 0.0;
    for (size_t k = 0; k < coefficients.size(); ++k) s += k * (k + 2.0) * coefficients[k] * coefficients[k];
    return s;
}

double ZonalS3Function::lp_norm(double p, int nodes) const
{
    // Gauss-Chebyshev quadrature of the second kind for the weight sin^2.
    double s = 0.0;
    for (int i = 1; i <= nodes; ++i) {
        const double theta = i * std::numbers::pi / (nodes + 1);
        const double sine = std::sin(theta);
        s += sine * sine * std::pow(std::abs(value(std::cos(theta))), p);
    }
    s *= std::numbers::pi / (nodes + 1) * (2.0 / std::numbers::pi);
    return std::pow(s, 1.0 / p);
}

TheoremReport verify_sobolev(const Subject& subject, double delta, int trials, std::uint64_t seed)
{
    TheoremReport r = start_report("sobolev", subject);
    r.seed = seed;
    const int n = subject.dimension();
    r.hypothesis["delta"] = delta;
    if (n < 3) return not_met(std::move(r), "requires n >= 3; meshes are surfaces");
    const SobolevConstants sc = sobolev_constants(n, delta);
    const ModelManifold& model = subject.model();
    const double ricci = model.ricci_lowest();
    if (!(ricci > 0.0)) {
        r.hypothesis["bottom"] = ricci - (n - 1.0);
        return not_met(std::move(r), "Ricci level cannot be rescaled to n-1");
    }
    // Rescale so that the Ricci level is n - 1; the bottom of (1-delta)Delta + rho - (n-1)
    // is then the constant rho - (n-1).
    const ModelManifold unit = model.scaled(std::sqrt(ricci / (n - 1.0)));
    const double bottom = schrodinger_bottom(unit, unit.ricci_lowest() - (n - 1.0), 1.0 - delta).bottom;
    r.hypothesis["bottom"] = bottom;
    r.tolerances["hypothesis"] = tolerance::model;
    r.tolerances["relative_violation"] = tolerance::sobolev;
    r.conclusion["p"] = sc.exponent;
    r.conclusion["gamma"] = sc.coefficient;
    if (bottom < -tolerance::model) return not_met(std::move(r), "(1-delta)Delta + rho - (n-1) is not nonnegative");
    if (model.kind != ModelKind::round_sphere || n != 3) {
        r.status = Status::report_only;
        r.notes.push_back("zonal quadrature is implemented for the S^3 model only");
        return r;
    }

    Rng rng(seed);
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        ZonalS3Function v;
        v.coefficients.resize(band_modes);
        for (double& a : v.coefficients) a = rng.normal();
        const double lhs = std::pow(v.lp_norm(sc.exponent), 2.0);
        const double rhs = sc.coefficient * v.dirichlet_energy() + v.l2_squared();
        const double slack = (rhs - lhs) / rhs;
        worst = std::min(worst, slack);
        if (slack < -tolerance::sobolev) ++violations;
    }
    r.conclusion["trials"] = trials;
    r.conclusion["violations"] = violations;
    r.margin = trials > 0 ? std::optional<double>(worst) : std::nullopt;
    r.status = violations == 0 ? Status::pass : Status::fail;
    return r;
}

TheoremReport verify_diameter(const Subject& subject, double epsilon)
{
    TheoremReport r = start_report("diameter", subject);
    const int n = subject.dimension();
    r.hypothesis["epsilon"] = epsilon;
    if (n < 3) return not_met(std::move(r), "requires n >= 3; meshes are surfaces");
    const EpsilonDomain domain = myers_epsilon_domain(n);
    r.hypothesis["epsilon_bound"] = domain.enforced_bound;
    r.hypothesis["epsilon_loose_bound"] = domain.loose_bound;
    if (epsilon < 0.0 || !(epsilon < domain.enforced_bound)) {
        throw DomainError("epsilon must lie in [0, 3/(n+4))");
    }
    const double bottom = shifted_bottom(subject, epsilon, 0.0).bottom;
    r.hypothesis["bottom"] = bottom;
    r.tolerances["distance"] = subject.is_mesh() ? tolerance::distance : tolerance::model;
    if (!(bottom > 0.0)) return not_met(std::move(r), "bottom of eps Delta + rho is not positive");

    const double k = std::sqrt(bottom / (n - 1.0));
    const DiameterConstant c = diameter_constant(n, delta_from_epsilon(epsilon));
    const double bound = c.value * std::numbers::pi / k;
    const double diam = subject_diameter(subject);
    r.hypothesis["k"] = k;
    r.conclusion["diameter"] = diam;
    r.conclusion["bound"] = bound;
    r.conclusion["C"] = c.value;
    r.conclusion["C_alternate"] = c.alternate;
    r.conclusion["bound_alternate"] = c.alternate * std::numbers::pi / k;
    if (c.discrepancy) r.notes.push_back("the two closed forms of C(n, delta) disagree; the primary form is asserted");
    r.margin = bound - diam;
    r.status = *r.margin >= -r.tolerances["distance"] * bound ? Status::pass : Status::fail;
    return r;
}

TheoremReport verify_lichnerowicz(const Subject& subject, double k)
{
    TheoremReport r = start_report("lichnerowicz", subject);
    const int n = subject.dimension();
    const double level = (n - 1.0) * k * k;
    const double epsilon = n / (n - 1.0);
    const SchrodingerResult s = shifted_bottom(subject, epsilon, level);
    r.hypothesis["k"] = k;
    r.hypothesis["epsilon"] = epsilon;
    r.hypothesis["bottom"] = s.bottom;
    const double hyp_tol = subject.is_mesh() ? tolerance::mesh_hypothesis * level : tolerance::model;
    r.tolerances["hypothesis"] = hyp_tol;
    if (s.bottom < -hyp_tol) return not_met(std::move(r), "n/(n-1) Delta + rho - (n-1)k^2 is not nonnegative");

    const double lambda1 = first_positive(subject);
    const double target = n * k * k;
    const double tol = subject.is_mesh() ? tolerance::eigenvalue * target : tolerance::model;
    r.tolerances["eigenvalue"] = tol;
    r.conclusion["lambda1"] = lambda1;
    r.conclusion["n_k2"] = target;
    r.margin = lambda1 - target;
    r.status = *r.margin >= -tol ? Status::pass : Status::fail;
    return r;
}

TheoremReport verify_lichnerowicz_kato(const Subject& subject, double k, double lambda, double horizon)
{
    TheoremReport r = start_report("lichnerowicz_kato", subject);
    const int n = subject.dimension();
    ThresholdParams params;
    params.n = n;
    params.k = k;
    params.lambda = lambda;
    params.horizon = horizon;
    const double threshold = hypothesis_threshold(ThresholdKind::lichnerowicz_kato, params);

    double kappa = 0.0;
    if (subject.is_mesh()) {
        const auto& m = subject.mesh();
        const ScalarField v = negative_part(ScalarField{m.rho.values.array() - lambda, m.rho.label});
        const KatoResult kr = kato_constant(m.spec, v, horizon);
        kappa = kr.value;
        r.hypothesis["kato_truncation"] = kr.truncation;
    } else {
        kappa = kato_constant(decompose(subject.model(), 1), std::max(0.0, lambda - subject.model().ricci_lowest()), horizon).value;
    }
    r.hypothesis["k"] = k;
    r.hypothesis["lambda"] = lambda;
    r.hypothesis["T"] = horizon;
    r.hypothesis["kappa_T"] = kappa;
    r.hypothesis["threshold"] = threshold;
    r.tolerances["hypothesis"] = tolerance::kato_hypothesis;
    if (kappa > threshold + tolerance::kato_hypothesis) return not_met(std::move(r), "Kato constant exceeds the threshold");

    const double lambda1 = first_positive(subject);
    const double target = n * k * k;
    const double tol = subject.is_mesh() ? tolerance::eigenvalue * target : tolerance::model;
    r.tolerances["eigenvalue"] = tol;
    r.conclusion["lambda1"] = lambda1;
    r.conclusion["n_k2"] = target;
    r.margin = lambda1 - target;
    r.status = *r.margin >= -tol ? Status::pass : Status::fail;
    return r;
}

TheoremReport verify_gradient_estimate(const Subject& subject, int trials, std::uint64_t seed)
{
    const MeshSubject& m = require_mesh(subject, "gradient estimate");
    TheoremReport r = start_report("gradient_estimate", subject);
    r.seed = seed;
    const int n = subject.dimension();
    const double target = hypothesis_threshold(ThresholdKind::buser, {.n = n});
    const ThresholdResult h = curvature_horizon(m, n);
    record_horizon(r, h, target);
    r.tolerances["hypothesis"] = tolerance::kato_hypothesis;
    r.tolerances["relative_violation"] = tolerance::gradient_estimate;
    if (h.kato_at_horizon > target + tolerance::kato_hypothesis) return not_met(std::move(r), "Kato constant exceeds 1/(16n)");

    const auto grid = log_time_grid(std::min(h.horizon, 1.0));
    constexpr double e2 = std::numbers::e * std::numbers::e;
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        ScalarField f = band_limited_field(m.spec, band_modes, seed + trial, m.mesh.label());
        f.values.array() += 0.1 - f.values.minCoeff();
        for (double t : grid) {
            const Eigen::VectorXd u = heat_apply(m.spec, f, t).field.values;
            const Eigen::VectorXd du = heat_time_derivative(m.spec, f, t);
            const Eigen::VectorXd grad = gradient_norm(m.mesh, ScalarField{u, f.label}).vertex_values.values;
            const double rhs = hypothesis_threshold(ThresholdKind::gradient_estimate, {.n = n, .time = t});
            for (Eigen::Index v = 0; v < u.size(); ++v) {
                if (!(u[v] > 0.0)) throw Error("heat solution lost positivity");
                const double lhs = grad[v] * grad[v] / (e2 * u[v] * u[v]) - du[v] / u[v];
                const double slack = (rhs - lhs) / rhs;
                worst = std::min(worst, slack);
                if (slack < -tolerance::gradient_estimate) ++violations;
            }
        }
    }
    r.conclusion["trials"] = trials;
    r.conclusion["time_points"] = static_cast<double>(grid.size());
    r.conclusion["t_max"] = grid.back();
    r.conclusion["violations"] = violations;
    r.margin = trials > 0 ? std::optional<double>(worst) : std::nullopt;
    r.status = violations == 0 ? Status::pass : Status::fail;
    return r;
}

TheoremReport verify_pseudo_poincare(const Subject& subject, int trials, std::uint64_t seed)
{
    const MeshSubject& m = require_mesh(subject, "pseudo-Poincare inequality");
    TheoremReport r = start_report("pseudo_poincare", subject);
    r.seed = seed;
    const int n = subject.dimension();
    const double target = hypothesis_threshold(ThresholdKind::buser, {.n = n});
    const ThresholdResult h = curvature_horizon(m, n);
    record_horizon(r, h, target);
    r.tolerances["hypothesis"] = tolerance::kato_hypothesis;
    r.tolerances["relative_violation"] = tolerance::pseudo_poincare;
    if (h.kato_at_horizon > target + tolerance::kato_hypothesis) return not_met(std::move(r), "Kato constant exceeds 1/(16n)");

    const double c_n = hypothesis_threshold(ThresholdKind::pseudo_poincare, {.n = n});
    const auto grid = log_time_grid(std::min(h.horizon, 1.0));
    int violations = 0;
    double worst = std::numeric_limits<double>::infinity();
    for (int trial = 0; trial < trials; ++trial) {
        const ScalarField f = band_limited_field(m.spec, band_modes, seed + trial, m.mesh.label());
        const double df = gradient_l1(m.mesh, f);
        for (double t : grid) {
            const Eigen::VectorXd diff = f.values - heat_apply(m.spec, f, t).field.values;
            const double lhs = mass_l1(m.spec.mass, diff);
            const double rhs = c_n * std::sqrt(t) * df;
            const double slack = (rhs - lhs) / rhs;
            worst = std::min(worst, slack);
            if (slack < -tolerance::pseudo_poincare) ++violations;
        }
    }
    r.conclusion["c_n"] = c_n;
    r.conclusion["trials"] = trials;
    r.conclusion["time_points"] = static_cast<double>(grid.size());
    r.conclusion["violations"] = violations;
    r.margin = trials > 0 ? std::optional<double>(worst) : std::nullopt;
    r.status = violations == 0 ? Status::pass : Status::fail;
    return r;
}

TheoremReport verify_buser(const Subject& subject)
{
    const MeshSubject& m = require_mesh(subject, "Buser inequality");
    TheoremReport r = start_report("buser", subject);
    const int n = subject.dimension();
    const double target = hypothesis_threshold(ThresholdKind::buser, {.n = n});
    const ThresholdResult h = curvature_horizon(m, n);
    record_horizon(r, h, target);

    const double lambda1 = m.spec.eigenvalues[1];
    const IsoperimetryResult sweep = cheeger_sweep(m.mesh, m.spec);
    const double denominator = sweep.value / std::sqrt(h.horizon) + sweep.value * sweep.value;
    r.conclusion["lambda1"] = lambda1;
    r.conclusion["h_sweep"] = sweep.value;
    r.conclusion["empirical_c_n"] = lambda1 / denominator;
    if (m.mesh.vertex_count() <= cheeger_exact_max_vertices) {
        const double h_exact = cheeger_exact(m.mesh).value;
        r.conclusion["h_exact"] = h_exact;
        r.conclusion["cheeger_lower_bound"] = h_exact * h_exact / 4.0;
    }
    r.notes.push_back("c_n is not explicit; the empirical constant over-estimates it because h_sweep >= h");
    r.status = Status::report_only;
    return r;
}

TheoremReport verify_isoperimetric(const Subject& subject, int isoperimetric_case, double p)
{
    const MeshSubject& m = require_mesh(subject, "isoperimetric inequality");
    if (isoperimetric_case != 1 && isoperimetric_case != 2) throw DomainError("isoperimetric case must be 1 or 2");
    TheoremReport r = start_report("isoperimetric", subject);
    const int n = subject.dimension();
    const double d = m.diam.value;
    const ScalarField rho_minus = negative_part(m.rho);
    r.hypothesis["case"] = isoperimetric_case;
    r.hypothesis["D"] = d;

    double xi = 0.0, nu = 0.0;
    if (isoperimetric_case == 1) {
        const ThresholdResult h = curvature_horizon(m, n);
        record_horizon(r, h, 1.0 / (16.0 * n));
        xi = d / std::sqrt(h.horizon);
        nu = hypothesis_threshold(ThresholdKind::isoperimetric_nu, {.n = n, .kappa = h.kato_at_horizon});
    } else {
        if (!(p > 1.0)) throw DomainError("isoperimetric case 2 needs p > 1");
        const double horizon = d * d;
        const ScalarField power{rho_minus.values.array().pow(p), rho_minus.label};
        const double kappa = kato_constant(m.spec, power, horizon).value;
        const double bound = std::pow(std::pow(d, 2.0 * p - 2.0) * kappa, 1.0 / p);
        r.hypothesis["p"] = p;
        r.hypothesis["T"] = horizon;
        r.hypothesis["kappa_T_rho_minus_p"] = kappa;
        r.hypothesis["I"] = bound;
        ThresholdParams params;
        params.n = n;
        params.horizon = horizon;
        params.diameter = d;
        params.p = p;
        params.isoperimetric_bound = bound;
        xi = hypothesis_threshold(ThresholdKind::isoperimetric_xi, params);
        nu = n;
    }
    const IsoperimetryResult iso = isoperimetric_sweep(m.mesh, m.spec, nu);
    const double product = std::pow(m.mesh.total_volume(), 1.0 / nu) * d * iso.value;
    r.conclusion["xi"] = xi;
    r.conclusion["nu"] = nu;
    r.conclusion["I_nu_sweep"] = iso.value;
    r.conclusion["volume"] = m.mesh.total_volume();
    r.conclusion["implied_c_n_lower_bound"] = std::pow(product, -1.0 / (1.0 + xi));
    r.notes.push_back("c_n is not explicit; the implied lower bound uses the sweep upper bound on I_nu");
    r.status = Status::report_only;
    return r;
}

TheoremReport verify_geometric_kato(const Subject& subject, double scale)
{
    const MeshSubject& m = require_mesh(subject, "geometric Kato estimate");
    TheoremReport r = start_report("geometric_kato", subject);
    const int n = subject.dimension();
    const double d = m.diam.value;
    const double radius = scale > 0.0 ? scale : d / 2.0;
    if (radius > d) throw DomainError("scale R must not exceed the diameter");
    const ScalarField rho_minus = negative_part(m.rho);
    const KatoResult kr = kato_constant(m.spec, rho_minus, radius * radius);
    const FunctionalResult weighted = geometric_kato_functional(m.mesh, rho_minus, radius, true, d);
    const FunctionalResult unweighted = geometric_kato_functional(m.mesh, rho_minus, radius, false, d);
    r.hypothesis["R"] = radius;
    r.hypothesis["D"] = d;
    r.conclusion["kappa_R2"] = kr.value;
    r.conclusion["kato_target"] = 1.0 / (16.0 * n);
    r.conclusion["weighted_functional"] = weighted.value;
    r.conclusion["unweighted_functional"] = unweighted.value;
    if (weighted.value > 0.0) {
        r.conclusion["implied_lambda"] = kr.value / weighted.value;
    } else {
        r.conclusion["implied_lambda"] = std::nullopt;
        r.notes.push_back("weighted functional vanishes; implied lambda is undefined");
    }
    r.notes.push_back("lambda_n is not explicit; the ratio calibrates it empirically");
    r.status = Status::report_only;
    return r;
}

TheoremReport verify_betti(const Subject& subject)
{
    const MeshSubject& m = require_mesh(subject, "Betti number bound");
    TheoremReport r = start_report("betti", subject);
    const int n = subject.dimension();
    const FunctionalResult f = geometric_kato_functional(m.mesh, negative_part(m.rho), 0.0, false, m.diam.value);
    const int b1 = betti_one(m.mesh);
    r.hypothesis["unweighted_functional"] = f.value;
    r.conclusion["b1"] = b1;
    r.conclusion["n"] = n;
    r.margin = static_cast<double>(n - b1);
    if (f.value == 0.0) {
        r.status = b1 <= n ? Status::pass : Status::fail;
    } else {
        r.status = Status::report_only;
        r.notes.push_back("negative curvature present; eta_n is not explicit");
    }
    return r;
}

} // namespace specgeo
