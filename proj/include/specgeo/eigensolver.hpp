#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>

#include <cstdint>
#include <optional>

namespace specgeo {

struct EigenPairs
{
    Eigen::VectorXd values;
    /// Orthonormal columns.
    Eigen::MatrixXd vectors;
    /// |A y - theta y| per pair.
    Eigen::VectorXd residuals;
    int krylov_dimension = 0;
};

struct EigensolverOptions
{
    int count = 1;
    /// Strict lower bound on the spectrum; A - shift * I must be positive definite.
    double shift = 0.0;
    std::uint64_t seed = 42;
    double tolerance = 1e-10;
    /// Per-pair cap on Krylov columns.
    int iteration_cap = 10000;
    int block_size = 16;
    /// Matrices at most this large are solved densely.
    int dense_threshold = 600;
    /// Unit vector known to be an eigenvector with eigenvalue `deflated_value`;
    /// it is returned exactly as the first pair.
    std::optional<Eigen::VectorXd> deflate;
    double deflated_value = 0.0;
};

/// Smallest eigenpairs of a sparse symmetric matrix.
///
/// Small problems use a dense symmetric eigensolver. Larger ones run a block
/// Krylov iteration on (A - shift I)^{-1} with full reorthogonalisation and a
/// Rayleigh-Ritz projection of A itself, growing the basis until every wanted
/// pair meets the residual tolerance. Eigenvector signs are normalised so the
/// entry of largest magnitude is positive. Output depends only on the inputs
/// and the seed.
EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, const EigensolverOptions& options);

/// Dense reference solver (all pairs), same sign convention.
EigenPairs dense_eigenpairs(const Eigen::MatrixXd& a);

} // namespace specgeo
