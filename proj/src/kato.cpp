#include "specgeo/errors.hpp"
#include "specgeo/kato.hpp"

#include <cmath>
#include <iomanip>
#include <sstream>

namespace specgeo {

namespace {

void require_nonnegative(const ScalarField& v)
{
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (!std::isfinite(v[i])) throw DomainError("potential is not finite at vertex " + std::to_string(i));
        if (v[i] < 0.0) throw DomainError("potential is negative at vertex " + std::to_string(i));
    }
}

void require_mesh_binding(const SpectralDecomposition& spec, const ScalarField& v)
{
    if (spec.source != SpectrumSource::mesh) throw DomainError("field potentials need a mesh spectrum");
    if (v.size() != spec.vertex_count()) throw DomainError("potential does not match the manifold's vertex count");
    if (!v.label.empty() && !spec.label.empty() && v.label != spec.label) {
        throw DomainError("potential bound to '" + v.label + "' applied to '" + spec.label + "'");
    }
}

KatoResult max_with_argmax(const Eigen::VectorXd& values)
{
    KatoResult r;
    r.value = values[0];
    for (Eigen::Index i = 1; i < values.size(); ++i) {
        if (values[i] > r.value) {
            r.value = values[i];
            r.argmax = static_cast<int>(i);
        }
    }
    return r;
}

double top_eigenvalue(const SpectralDecomposition& spec) { return spec.eigenvalues[spec.mode_count() - 1]; }

} // namespace

double heat_time_integral(double lambda, double horizon)
{
    if (lambda == 0.0) return horizon;
    return -std::expm1(-lambda * horizon) / lambda;
}

Eigen::VectorXd kato_profile(const SpectralDecomposition& spec, const ScalarField& potential, double horizon)
{
    if (!(horizon > 0.0)) throw DomainError("time horizon must be positive");
    require_mesh_binding(spec, potential);
    require_nonnegative(potential);
    const Eigen::VectorXd c = spec.coefficients(potential.values);
    Eigen::VectorXd tau(spec.mode_count());
    for (int i = 0; i < spec.mode_count(); ++i) tau[i] = i == 0 ? horizon : heat_time_integral(spec.eigenvalues[i], horizon);
    return spec.eigenfunctions * c.cwiseProduct(tau);
}

KatoResult kato_constant(const SpectralDecomposition& spec, const ScalarField& potential, double horizon)
{
    KatoResult r = max_with_argmax(kato_profile(spec, potential, horizon));
    r.value = std::max(r.value, 0.0);
    r.parameter = horizon;
    r.truncation = spec.complete() ? 0.0 : heat_time_integral(top_eigenvalue(spec), horizon) / horizon;
    return r;
}

KatoResult kato_constant(const SpectralDecomposition& /*spec*/, double constant_potential, double horizon)
{
    if (!(horizon > 0.0)) throw DomainError("time horizon must be positive");
    if (constant_potential < 0.0) throw DomainError("potential must be nonnegative");
    KatoResult r;
    r.value = constant_potential * horizon;
    r.parameter = horizon;
    return r;
}

KatoResult resolvent_constant(const SpectralDecomposition& spec, const ScalarField& potential, double shift)
{
    if (!(shift > 0.0)) throw DomainError("resolvent shift L must be positive");
    require_mesh_binding(spec, potential);
    require_nonnegative(potential);
    const Eigen::VectorXd c = spec.coefficients(potential.values);
    const Eigen::VectorXd weights = (spec.eigenvalues.array() + shift).inverse().matrix();
    KatoResult r = max_with_argmax(spec.eigenfunctions * c.cwiseProduct(weights));
    r.value = std::max(r.value, 0.0);
    r.parameter = shift;
    r.truncation = spec.complete() ? 0.0 : shift / (top_eigenvalue(spec) + shift);
    return r;
}

KatoResult resolvent_constant(const SpectralDecomposition& /*spec*/, double constant_potential, double shift)
{
    if (!(shift > 0.0)) throw DomainError("resolvent shift L must be positive");
    if (constant_potential < 0.0) throw DomainError("potential must be nonnegative");
    KatoResult r;
    r.value = constant_potential / shift;
    r.parameter = shift;
    return r;
}

BracketingGap bracketing_gap(const SpectralDecomposition& spec, const ScalarField& potential, double horizon, double shift)
{
    BracketingGap g;
    g.kato = kato_constant(spec, potential, horizon).value;
    g.resolvent = resolvent_constant(spec, potential, shift).value;
    g.lower_slack = g.kato + std::expm1(-shift * horizon) * g.resolvent;
    g.upper_slack = std::exp(shift * horizon) * g.resolvent - g.kato;
    return g;
}

double semigroup_lower_bound(double kappa, double horizon)
{
    if (!(horizon > 0.0)) throw DomainError("time horizon must be positive");
    if (kappa < 0.0) throw DomainError("Kato constant must be nonnegative");
    if (kappa >= 1.0) throw DomainError("Kato condition fails at this horizon");
    return -std::log1p(-kappa) / horizon;
}

ThresholdResult kato_first_threshold(const SpectralDecomposition& spec, const ScalarField& potential, double target, double cap)
{
    if (!(target > 0.0)) throw DomainError("threshold target must be positive");
    if (!(cap > 0.0)) throw DomainError("threshold cap must be positive");
    ThresholdResult out;
    out.cap = cap;
    const double at_cap = kato_constant(spec, potential, cap).value;
    if (at_cap <= target) {
        out.horizon = cap;
        out.capped = true;
        out.kato_at_horizon = at_cap;
        return out;
    }
    double lo = 0.0, hi = cap, kato_lo = 0.0;
    while (hi - lo > 1e-6 * 0.5 * hi) {
        const double mid = 0.5 * (lo + hi);
        const double k = kato_constant(spec, potential, mid).value;
        if (k <= target) {
            lo = mid;
            kato_lo = k;
        } else {
            hi = mid;
        }
    }
    out.horizon = lo;
    out.kato_at_horizon = kato_lo;
    return out;
}

std::string kato_series(const SpectralDecomposition& spec, const ScalarField& potential, const std::vector<double>& horizons)
{
    std::ostringstream out;
    out << "T\tkappa\n" << std::setprecision(17);
    for (double t : horizons) out << t << '\t' << kato_constant(spec, potential, t).value << '\n';
    return out.str();
}

} // namespace specgeo
