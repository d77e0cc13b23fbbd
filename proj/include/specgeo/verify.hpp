#pragma once

#include "specgeo/manifold.hpp"
#include "specgeo/model.hpp"
#include "specgeo/spectral.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace specgeo {

enum class Status { pass, fail, report_only, hypothesis_not_met };

std::string to_string(Status status);
/// Severity order used for suite aggregation: pass < report_only < hypothesis_not_met < fail.
int severity(Status status);

/// Outcome of one theorem check on one manifold.
struct TheoremReport
{
    std::string theorem;
    std::string manifold;
    /// Named values; std::nullopt means undefined (e.g. a 0/0 ratio).
    std::map<std::string, std::optional<double>> hypothesis;
    std::map<std::string, std::optional<double>> conclusion;
    std::map<std::string, double> tolerances;
    std::optional<double> margin;
    Status status = Status::report_only;
    std::uint64_t seed = 0;
    std::vector<std::string> notes;
};

/// Mesh with its operator, spectrum, curvature and diameter computed once.
struct MeshSubject
{
    DiscreteManifold mesh;
    LaplaceOperator op;
    SpectralDecomposition spec;
    ScalarField rho;
    DiameterResult diam;
};

/// Everything a theorem check needs about a manifold.
struct Subject
{
    std::variant<std::shared_ptr<const MeshSubject>, ModelManifold> data;

    bool is_mesh() const { return data.index() == 0; }
    const MeshSubject& mesh() const { return *std::get<0>(data); }
    const ModelManifold& model() const { return std::get<1>(data); }
    const std::string& label() const;
    int dimension() const;
};

Subject prepare(const DiscreteManifold& mesh, int mode_count, std::uint64_t seed);
Subject prepare(const ModelManifold& model);

/// Global mesh tolerances; each report echoes the ones it used.
namespace tolerance {
inline constexpr double eigenvalue = 0.02;
inline constexpr double distance = 0.08;
inline constexpr double sweep_isoperimetry = 0.15;
inline constexpr double sobolev = 0.005;
inline constexpr double gradient_estimate = 0.01;
inline constexpr double pseudo_poincare = 0.05;
/// Slack on Schrodinger-bottom hypotheses for meshes, relative to (n-1) k^2.
inline constexpr double mesh_hypothesis = 0.05;
/// Slack on Kato hypotheses (absolute).
inline constexpr double kato_hypothesis = 1e-10;
/// Model checks are exact up to rounding.
inline constexpr double model = 1e-12;
} // namespace tolerance

TheoremReport verify_sobolev(const Subject& subject, double delta, int trials, std::uint64_t seed);
TheoremReport verify_diameter(const Subject& subject, double epsilon);
TheoremReport verify_lichnerowicz(const Subject& subject, double k);
TheoremReport verify_lichnerowicz_kato(const Subject& subject, double k, double lambda, double horizon);
TheoremReport verify_gradient_estimate(const Subject& subject, int trials, std::uint64_t seed);
TheoremReport verify_pseudo_poincare(const Subject& subject, int trials, std::uint64_t seed);
TheoremReport verify_buser(const Subject& subject);
/// isoperimetric_case is 1 or 2; p is used by case 2 only.
TheoremReport verify_isoperimetric(const Subject& subject, int isoperimetric_case, double p);
/// scale <= 0 selects R = D / 2.
TheoremReport verify_geometric_kato(const Subject& subject, double scale);
TheoremReport verify_betti(const Subject& subject);

/// Seeded field spanned by eigenfunctions 1..modes with standard normal coefficients.
ScalarField band_limited_field(const SpectralDecomposition& spec, int modes, std::uint64_t seed, const std::string& label);

/// Zonal function on S^3 sum_k a_k sin((k+1) theta) / sin(theta), whose terms
/// are orthonormal for the normalised measure and have eigenvalue k(k+2).
struct ZonalS3Function
{
    std::vector<double> coefficients;

    double value(double cos_theta) const;
    double l2_squared() const;
    double dirichlet_energy() const;
    /// (int |v|^p dmu)^(1/p) against the probability measure.
    double lp_norm(double p, int nodes = 2000) const;
};

} // namespace specgeo
