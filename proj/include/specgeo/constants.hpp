#pragma once

#include <string>

namespace specgeo {

/// Sobolev exponent and coefficient valid for delta in ((n+1)/(n+4), 1].
struct SobolevConstants
{
    int dimension = 3;
    double delta = 1.0;
    double exponent = 0.0;
    double coefficient = 0.0;
};

/// Lower end (n+1)/(n+4) of the admissible delta interval (excluded).
double sobolev_delta_bound(int n);

SobolevConstants sobolev_constants(int n, double delta);

struct DiameterConstant
{
    int dimension = 3;
    double delta = 1.0;
    /// sqrt(2 p gamma) / (p - 2).
    double value = 1.0;
    /// Closed radical in terms of 1 - delta.
    double alternate = 1.0;
    bool discrepancy = false;
    /// Set when p -> 2+ makes the constant numerically unbounded.
    bool unbounded = false;
};

DiameterConstant diameter_constant(int n, double delta);

enum class ThresholdKind {
    /// eps (1 - exp(-(T/eps)(lambda - (n-1) k^2)))
    diameter_kato,
    /// (1 - exp(-(n-2) lambda T)) / (n-2)
    finite_fundamental_group,
    /// n/(n-1) (1 - exp(-T (n-1)/n (lambda - (n-1) k^2)))
    lichnerowicz_kato,
    /// n/(n-1) (1 - exp(-T (n-1)^2/n (1 - k^2)))
    lichnerowicz_unit,
    /// 1 / (16 n)
    buser,
    /// 6 sqrt(n)
    pseudo_poincare,
    /// e^2 n / (2 t)
    gradient_estimate,
    /// n exp(8 sqrt(n kappa))
    isoperimetric_nu,
    /// max(D / sqrt(T), (16 n I)^(p / (2p - 2)))
    isoperimetric_xi,
};

struct ThresholdParams
{
    int n = 3;
    double epsilon = 0.0;
    double lambda = 0.0;
    double k = 0.0;
    double horizon = 0.0;
    double time = 0.0;
    double kappa = 0.0;
    double diameter = 0.0;
    double isoperimetric_bound = 0.0;
    double p = 2.0;
};

double hypothesis_threshold(ThresholdKind kind, const ThresholdParams& params);

ThresholdKind parse_threshold_kind(const std::string& name);
std::string to_string(ThresholdKind kind);

struct EpsilonDomain
{
    /// 3/(n+4), compatible with the Sobolev delta interval.
    double sobolev_bound = 0.0;
    /// 4/(n+3), the looser bound.
    double loose_bound = 0.0;
    double enforced_bound = 0.0;
};

EpsilonDomain myers_epsilon_domain(int n);

/// delta = 1 - epsilon.
inline double delta_from_epsilon(double epsilon) { return 1.0 - epsilon; }
inline double epsilon_from_delta(double delta) { return 1.0 - delta; }

/// Tab-separated table of p, gamma, both diameter-constant forms and the
/// dimension-only thresholds over a (n, delta) grid.
std::string constants_table(int n_min, int n_max, double delta_min, double delta_max, int delta_steps);

} // namespace specgeo
