#pragma once

#include "specgeo/spectral.hpp"

#include <string>
#include <utility>
#include <vector>

namespace specgeo {

/// Sup-norm style constant together with where it is attained.
struct KatoResult
{
    double value = 0.0;
    /// T for the parabolic constant, L for the resolvent one.
    double parameter = 0.0;
    /// Smallest vertex index attaining the max (0 for models).
    int argmax = 0;
    double truncation = 0.0;
};

/// Closed-form time integral of exp(-lambda t) over [0, T].
double heat_time_integral(double lambda, double horizon);

/// Per-vertex int_0^T P_t V dt.
Eigen::VectorXd kato_profile(const SpectralDecomposition& spec, const ScalarField& potential, double horizon);

/// kappa_T(V) = max_x int_0^T (P_t V)(x) dt. V must be nonnegative.
KatoResult kato_constant(const SpectralDecomposition& spec, const ScalarField& potential, double horizon);
/// Constant potential; valid for mesh and model spectra.
KatoResult kato_constant(const SpectralDecomposition& spec, double constant_potential, double horizon);

/// c_L(V) = max_x ((Delta + L)^{-1} V)(x).
KatoResult resolvent_constant(const SpectralDecomposition& spec, const ScalarField& potential, double shift);
KatoResult resolvent_constant(const SpectralDecomposition& spec, double constant_potential, double shift);

struct BracketingGap
{
    /// kappa_T - (1 - exp(-L T)) c_L.
    double lower_slack = 0.0;
    /// exp(L T) c_L - kappa_T.
    double upper_slack = 0.0;
    double kato = 0.0;
    double resolvent = 0.0;
};

BracketingGap bracketing_gap(const SpectralDecomposition& spec, const ScalarField& potential, double horizon, double shift);

/// Smallest beta with kappa <= 1 - exp(-beta T): beta = -ln(1 - kappa) / T.
double semigroup_lower_bound(double kappa, double horizon);

struct ThresholdResult
{
    double horizon = 0.0;
    /// True when kappa never exceeds the target below the cap.
    bool capped = false;
    double kato_at_horizon = 0.0;
    double cap = 0.0;
};

/// Largest T in (0, cap] with kappa_T(V) <= target, by bisection to 1e-6 relative.
ThresholdResult kato_first_threshold(const SpectralDecomposition& spec, const ScalarField& potential, double target, double cap);

/// Tab-separated (T, kappa_T) series.
std::string kato_series(const SpectralDecomposition& spec, const ScalarField& potential, const std::vector<double>& horizons);

} // namespace specgeo
