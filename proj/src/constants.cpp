#include "specgeo/constants.hpp"
#include "specgeo/errors.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

namespace specgeo {

namespace {

double exponent_formula(int n, double delta) { return ((1.0 + delta) * n - 1.0 + delta) / (n - 1.0 - delta); }

double coefficient_formula(int n, double delta)
{
    return (3.0 + delta) * (n - delta) / ((n - 1.0 - delta) * n * (n - 1.0));
}

std::string format_number(double x)
{
    std::ostringstream s;
    s << std::setprecision(10) << x;
    return s.str();
}

void require(bool condition, const std::string& violated)
{
    if (!condition) throw DomainError("threshold domain violated: " + violated);
}

} // namespace

double sobolev_delta_bound(int n) { return (n + 1.0) / (n + 4.0); }

SobolevConstants sobolev_constants(int n, double delta)
{
    if (n < 3) throw DomainError("Sobolev constants need n >= 3");
    const double bound = sobolev_delta_bound(n);
    if (!(delta > bound) || delta > 1.0) {
        throw DomainError("delta must lie in ((n+1)/(n+4), 1] = (" + format_number(bound) + ", 1]");
    }
    return SobolevConstants{n, delta, exponent_formula(n, delta), coefficient_formula(n, delta)};
}

DiameterConstant diameter_constant(int n, double delta)
{
    if (n < 3) throw DomainError("diameter constant needs n >= 3");
    const double epsilon = epsilon_from_delta(delta);
    const double remark = 4.0 / (n + 3.0);
    if (!(epsilon < remark) || epsilon < 0.0) {
        throw DomainError("delta must satisfy 0 <= 1 - delta < 4/(n+3) = " + format_number(remark));
    }
    DiameterConstant c;
    c.dimension = n;
    c.delta = delta;
    const double p = exponent_formula(n, delta);
    const double gamma = coefficient_formula(n, delta);
    const double gap = p - 2.0;
    const double shrink = 1.0 - epsilon * (n + 3.0) / 4.0;
    if (gap <= 1e-9 || shrink <= 1e-9) {
        c.unbounded = true;
        c.value = std::numeric_limits<double>::infinity();
        c.alternate = std::numeric_limits<double>::infinity();
        return c;
    }
    c.value = std::sqrt(2.0 * p * gamma) / gap;
    c.alternate = std::sqrt((1.0 - epsilon * (n - 1.0) / n) / shrink * (1.0 + epsilon / (n - 1.0)));
    c.discrepancy = std::abs(c.value - c.alternate) > 1e-9 * std::max(std::abs(c.value), std::abs(c.alternate));
    return c;
}

double hypothesis_threshold(ThresholdKind kind, const ThresholdParams& q)
{
    const int n = q.n;
    switch (kind) {
    case ThresholdKind::diameter_kato: {
        require(n >= 3, "n >= 3");
        require(q.epsilon >= 0.0 && q.epsilon < 4.0 / (n + 3.0), "0 <= epsilon < 4/(n+3)");
        require(q.horizon >= 0.0, "T >= 0");
        const double gap = q.lambda - (n - 1.0) * q.k * q.k;
        require(gap > 0.0, "lambda > (n-1) k^2");
        if (q.epsilon == 0.0) return 0.0;
        return -q.epsilon * std::expm1(-(q.horizon / q.epsilon) * gap);
    }
    case ThresholdKind::finite_fundamental_group:
        require(n >= 3, "n >= 3");
        require(q.lambda > 0.0, "lambda > 0");
        require(q.horizon >= 0.0, "T >= 0");
        return -std::expm1(-(n - 2.0) * q.lambda * q.horizon) / (n - 2.0);
    case ThresholdKind::lichnerowicz_kato: {
        require(n >= 2, "n >= 2");
        require(q.horizon >= 0.0, "T >= 0");
        const double gap = q.lambda - (n - 1.0) * q.k * q.k;
        require(gap > 0.0, "lambda > (n-1) k^2");
        return -(n / (n - 1.0)) * std::expm1(-q.horizon * (n - 1.0) / n * gap);
    }
    case ThresholdKind::lichnerowicz_unit:
        require(n >= 2, "n >= 2");
        require(q.horizon >= 0.0, "T >= 0");
        require(q.k >= 0.0 && q.k < 1.0, "0 <= k < 1");
        return -(n / (n - 1.0)) * std::expm1(-q.horizon * (n - 1.0) * (n - 1.0) / n * (1.0 - q.k * q.k));
    case ThresholdKind::buser:
        require(n >= 1, "n >= 1");
        return 1.0 / (16.0 * n);
    case ThresholdKind::pseudo_poincare:
        require(n >= 1, "n >= 1");
        return 6.0 * std::sqrt(static_cast<double>(n));
    case ThresholdKind::gradient_estimate:
        require(n >= 1, "n >= 1");
        require(q.time > 0.0, "t > 0");
        return std::numbers::e * std::numbers::e * n / (2.0 * q.time);
    case ThresholdKind::isoperimetric_nu:
        require(n >= 1, "n >= 1");
        require(q.kappa >= 0.0, "kappa >= 0");
        return n * std::exp(8.0 * std::sqrt(n * q.kappa));
    case ThresholdKind::isoperimetric_xi:
        require(n >= 1, "n >= 1");
        require(q.horizon > 0.0, "T > 0");
        require(q.diameter > 0.0, "D > 0");
        require(q.p > 1.0, "p > 1");
        require(q.isoperimetric_bound >= 0.0, "I >= 0");
        return std::max(
            q.diameter / std::sqrt(q.horizon),
            std::pow(16.0 * n * q.isoperimetric_bound, q.p / (2.0 * q.p - 2.0)));
    }
    throw DomainError("unknown threshold kind");
}

ThresholdKind parse_threshold_kind(const std::string& raw)
{
    std::string name = raw;
    std::replace(name.begin(), name.end(), '-', '_');
    for (ThresholdKind k : {ThresholdKind::diameter_kato,
                            ThresholdKind::finite_fundamental_group,
                            ThresholdKind::lichnerowicz_kato,
                            ThresholdKind::lichnerowicz_unit,
                            ThresholdKind::buser,
                            ThresholdKind::pseudo_poincare,
                            ThresholdKind::gradient_estimate,
                            ThresholdKind::isoperimetric_nu,
                            ThresholdKind::isoperimetric_xi}) {
        if (to_string(k) == name) return k;
    }
    throw DomainError("unknown threshold kind '" + raw + "'");
}

std::string to_string(ThresholdKind kind)
{
    switch (kind) {
    case ThresholdKind::diameter_kato: return "diameter_kato";
    case ThresholdKind::finite_fundamental_group: return "finite_fundamental_group";
    case ThresholdKind::lichnerowicz_kato: return "lichnerowicz_kato";
    case ThresholdKind::lichnerowicz_unit: return "lichnerowicz_unit";
    case ThresholdKind::buser: return "buser";
    case ThresholdKind::pseudo_poincare: return "pseudo_poincare";
    case ThresholdKind::gradient_estimate: return "gradient_estimate";
    case ThresholdKind::isoperimetric_nu: return "isoperimetric_nu";
    case ThresholdKind::isoperimetric_xi: return "isoperimetric_xi";
    }
    return "unknown";
}

EpsilonDomain myers_epsilon_domain(int n)
{
    if (n < 3) throw DomainError("epsilon domain needs n >= 3");
    EpsilonDomain d;
    d.sobolev_bound = 3.0 / (n + 4.0);
    d.loose_bound = 4.0 / (n + 3.0);
    d.enforced_bound = d.sobolev_bound;
    return d;
}

std::string constants_table(int n_min, int n_max, double delta_min, double delta_max, int delta_steps)
{
    if (n_min < 3 || n_max < n_min) throw DomainError("dimension range must satisfy 3 <= n_min <= n_max");
    if (delta_steps < 1) throw DomainError("delta grid needs at least one step");
    if (delta_min > delta_max) throw DomainError("delta range is empty");
    std::ostringstream out;
    out << "n\tdelta\tp\tgamma\tC\tC_alternate\tdiscrepancy\teps_bound\tbuser\tpseudo_poincare\n";
    out << std::setprecision(10);
    for (int n = n_min; n <= n_max; ++n) {
        const double eps_bound = myers_epsilon_domain(n).enforced_bound;
        const double buser = hypothesis_threshold(ThresholdKind::buser, {.n = n});
        const double pp = hypothesis_threshold(ThresholdKind::pseudo_poincare, {.n = n});
        for (int s = 0; s < delta_steps; ++s) {
            const double delta = delta_steps == 1 ? delta_min
                                                  : delta_min + (delta_max - delta_min) * s / (delta_steps - 1.0);
            out << n << '\t' << delta << '\t';
            if (!(delta > sobolev_delta_bound(n)) || delta > 1.0) {
                out << "out-of-domain\t-\t-\t-\t-\t" << eps_bound << '\t' << buser << '\t' << pp << '\n';
                continue;
            }
            const auto sc = sobolev_constants(n, delta);
            const auto dc = diameter_constant(n, delta);
            out << sc.exponent << '\t' << sc.coefficient << '\t' << dc.value << '\t' << dc.alternate << '\t'
                << (dc.discrepancy ? "yes" : "no") << '\t' << eps_bound << '\t' << buser << '\t' << pp << '\n';
        }
    }
    return out.str();
}

} // namespace specgeo
