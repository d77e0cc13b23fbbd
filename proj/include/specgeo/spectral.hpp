#pragma once

#include "specgeo/manifold.hpp"
#include "specgeo/model.hpp"

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <string>
#include <vector>

namespace specgeo {

inline constexpr int default_mode_cap = 300;
inline constexpr std::uint64_t default_seed = 42;

/// Cotangent stiffness and lumped mass of a mesh.
struct LaplaceOperator
{
    /// K(u,v) = -(cot a + cot b)/2 off the diagonal, K(u,u) = -sum of its row.
    Eigen::SparseMatrix<double> stiffness;
    /// Diagonal of the lumped mass matrix (vertex volumes).
    Eigen::VectorXd mass;
    /// Number of edges whose cotangent weight is negative.
    int negative_weight_count = 0;
    std::string label;

    int vertex_count() const { return static_cast<int>(mass.size()); }
};

LaplaceOperator assemble(const DiscreteManifold& mesh);

/// Cotangent weight (cot a + cot b)/2 of every edge, in edge order.
std::vector<double> cotangent_weights(const DiscreteManifold& mesh);

enum class SpectrumSource { mesh, model };

/// Low part of the spectrum of the Laplacian.
///
/// For meshes `eigenfunctions` holds mass-orthonormal vertex vectors (one per
/// column) and `residuals` the per-pair residual |K phi - lambda M phi| / |phi|.
/// For models only eigenvalues and analytic mode descriptors are stored.
struct SpectralDecomposition
{
    Eigen::VectorXd eigenvalues;
    Eigen::MatrixXd eigenfunctions;
    Eigen::VectorXd residuals;
    Eigen::VectorXd mass;
    std::vector<ModelMode> modes;
    SpectrumSource source = SpectrumSource::mesh;
    std::string label;
    double total_volume = 0.0;
    std::uint64_t seed = default_seed;

    int mode_count() const { return static_cast<int>(eigenvalues.size()); }
    int vertex_count() const { return static_cast<int>(mass.size()); }
    /// True when every mode of the discrete operator is present.
    bool complete() const { return source == SpectrumSource::mesh && mode_count() == vertex_count(); }

    /// Mass inner products <f, phi_i> for all modes.
    Eigen::VectorXd coefficients(const Eigen::VectorXd& f) const;
    /// Discarded-mass indicator exp(-lambda_{m-1} t).
    double truncation_indicator(double t) const;
};

struct DecomposeOptions
{
    int mode_count = default_mode_cap;
    std::uint64_t seed = default_seed;
    double tolerance = 1e-10;
    int iteration_cap = 10000;
};

SpectralDecomposition decompose(const LaplaceOperator& op, const DecomposeOptions& options = {});
SpectralDecomposition decompose(const ModelManifold& model, int mode_count);

/// min(vertex count, default_mode_cap).
int default_mode_count(int vertex_count);

struct HeatResult
{
    ScalarField field;
    double truncation = 0.0;
};

/// P_t f = sum_i exp(-lambda_i t) <f, phi_i> phi_i.
HeatResult heat_apply(const SpectralDecomposition& spec, const ScalarField& f, double t);

/// d/dt P_t f = -sum_i lambda_i exp(-lambda_i t) <f, phi_i> phi_i.
Eigen::VectorXd heat_time_derivative(const SpectralDecomposition& spec, const ScalarField& f, double t);

struct HeatKernelRow
{
    ScalarField row;
    double truncation = 0.0;
    /// Set when t < 1 / lambda_{m-1}, where the truncated kernel is not trusted.
    bool below_trusted_time = false;
};

HeatKernelRow heat_kernel_row(const SpectralDecomposition& spec, double t, int x);

struct SchrodingerResult
{
    double epsilon = 0.0;
    std::string potential_label;
    double bottom = 0.0;
    /// Mass-normalised ground state, sign fixed so that its mass integral is >= 0.
    Eigen::VectorXd ground_state;
    bool positive = false;
    double residual = 0.0;
};

/// Smallest eigenvalue of (eps K + diag(q * vol)) phi = lambda M phi.
SchrodingerResult schrodinger_bottom(
    const LaplaceOperator& op,
    const ScalarField& q,
    double epsilon,
    std::uint64_t seed = default_seed);

/// Model manifolds carry constant potentials only; the bottom is the constant.
SchrodingerResult schrodinger_bottom(const ModelManifold& model, double constant_q, double epsilon);

struct GradientField
{
    /// |grad f| on each face (affine interpolant).
    std::vector<double> face_values;
    /// Face-area-weighted average of the incident face values.
    ScalarField vertex_values;
};

GradientField gradient_norm(const DiscreteManifold& mesh, const ScalarField& f);

/// sum_faces area * |grad f|^2.
double dirichlet_energy(const DiscreteManifold& mesh, const ScalarField& f);

/// sum_faces area * |grad f|.
double gradient_l1(const DiscreteManifold& mesh, const ScalarField& f);

/// Tab-separated (index, eigenvalue, residual) table.
std::string spectrum_table(const SpectralDecomposition& spec);

} // namespace specgeo
