#pragma once

#include <Eigen/Core>

#include <string>
#include <vector>

namespace specgeo {

enum class ModelKind { round_sphere, flat_torus };

/// Analytic label of one eigenvalue of a model manifold: the harmonic degree
/// on a sphere, the dual lattice vector on a torus.
struct ModelMode
{
    int degree = 0;
    std::vector<int> lattice;
};

/// Closed-form spectrum generator for the round sphere S^n(r) and the flat
/// torus R^n / (L_1 Z x ... x L_n Z).
struct ModelManifold
{
    ModelKind kind = ModelKind::round_sphere;
    int dimension = 3;
    double radius = 1.0;
    std::vector<double> periods;
    int mode_count = 1;
    /// Ascending, complete multiplicity blocks; at least mode_count entries.
    Eigen::VectorXd eigenvalues;
    std::vector<ModelMode> modes;
    double total_volume = 0.0;
    std::string label;

    double diameter() const;
    /// Constant lowest Ricci eigenvalue ((n-1)/r^2 on spheres, 0 on tori).
    double ricci_lowest() const;
    double first_positive_eigenvalue() const;
    /// Returns a copy with the metric scaled by s (lengths times s).
    ModelManifold scaled(double s) const;
};

ModelManifold make_sphere_model(int dimension, double radius, int mode_count);
ModelManifold make_torus_model(const std::vector<double>& periods, int mode_count);

/// `kind` is "sphere" or "torus"; `radius_or_periods` holds a single radius for
/// spheres, and one period (replicated) or `n` periods for tori.
ModelManifold make_model(const std::string& kind, int dimension, const std::vector<double>& radius_or_periods, int mode_count);

/// Reads a "key = value" model file with keys kind, dim, radius | periods, modes.
ModelManifold load_model_config(const std::string& path);
ModelManifold parse_model_config(const std::string& text);

} // namespace specgeo
