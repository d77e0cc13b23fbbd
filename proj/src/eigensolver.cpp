#include "specgeo/eigensolver.hpp"
#include "specgeo/errors.hpp"
#include "specgeo/rng.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>

namespace specgeo {

namespace {

void normalize_signs(Eigen::MatrixXd& vectors)
{
    for (Eigen::Index j = 0; j < vectors.cols(); ++j) {
        Eigen::Index arg = 0;
        double best = -1.0;
        for (Eigen::Index i = 0; i < vectors.rows(); ++i) {
            // Ties within rounding go to the smallest index.
            if (std::abs(vectors(i, j)) > best * (1.0 + 1e-9)) {
                best = std::abs(vectors(i, j));
                arg = i;
            }
        }
        if (vectors(arg, j) < 0.0) vectors.col(j) *= -1.0;
    }
}

Eigen::VectorXd residual_norms(const Eigen::SparseMatrix<double>& a, const Eigen::VectorXd& values, const Eigen::MatrixXd& vectors)
{
    const Eigen::MatrixXd av = a * vectors;
    Eigen::VectorXd r(values.size());
    for (Eigen::Index j = 0; j < values.size(); ++j) r[j] = (av.col(j) - values[j] * vectors.col(j)).norm();
    return r;
}

/// Growing orthonormal basis with rank-revealing insertion.
class OrthonormalBasis
{
public:
    OrthonormalBasis(Eigen::Index rows, const std::optional<Eigen::VectorXd>& deflate)
        : m_basis(rows, 0)
        , m_deflate(deflate)
    {}

    Eigen::Index size() const { return m_size; }
    const Eigen::MatrixXd& storage() const { return m_basis; }
    auto columns() const { return m_basis.leftCols(m_size); }

    /// Orthogonalises v against the basis (twice) and appends it when a new
    /// direction survives. Returns false if v lies in the span.
    bool append(Eigen::VectorXd v)
    {
        const double original = v.norm();
        if (original == 0.0) return false;
        for (int pass = 0; pass < 2; ++pass) {
            if (m_deflate) v -= m_deflate->dot(v) * *m_deflate;
            if (m_size > 0) {
                const Eigen::VectorXd h = m_basis.leftCols(m_size).transpose() * v;
                v -= m_basis.leftCols(m_size) * h;
            }
        }
        const double norm = v.norm();
        if (norm <= 1e-10 * original) return false;
        if (m_size == m_basis.cols()) {
            m_basis.conservativeResize(Eigen::NoChange, std::max<Eigen::Index>(16, 2 * m_basis.cols()));
        }
        m_basis.col(m_size++) = v / norm;
        return true;
    }

private:
    Eigen::MatrixXd m_basis;
    Eigen::Index m_size = 0;
    std::optional<Eigen::VectorXd> m_deflate;
};

EigenPairs dense_smallest(const Eigen::SparseMatrix<double>& a, const EigensolverOptions& options)
{
    const Eigen::MatrixXd dense(a);
    EigenPairs all = dense_eigenpairs(dense);
    const Eigen::Index n = dense.rows();
    const int count = std::min<int>(options.count, static_cast<int>(n));
    EigenPairs out;
    out.krylov_dimension = static_cast<int>(n);
    if (!options.deflate) {
        out.values = all.values.head(count);
        out.vectors = all.vectors.leftCols(count);
    } else {
        const Eigen::VectorXd& u = *options.deflate;
        Eigen::Index drop = 0;
        (all.vectors.transpose() * u).cwiseAbs().maxCoeff(&drop);
        out.values.resize(count);
        out.vectors.resize(n, count);
        out.values[0] = options.deflated_value;
        out.vectors.col(0) = u;
        Eigen::Index j = 1;
        for (Eigen::Index i = 0; i < n && j < count; ++i) {
            if (i == drop) continue;
            Eigen::VectorXd v = all.vectors.col(i);
            v -= u.dot(v) * u;
            out.values[j] = all.values[i];
            out.vectors.col(j++) = v.normalized();
        }
    }
    normalize_signs(out.vectors);
    out.residuals = residual_norms(a, out.values, out.vectors);
    return out;
}

} // namespace

EigenPairs dense_eigenpairs(const Eigen::MatrixXd& a)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a);
    if (solver.info() != Eigen::Success) throw ConvergenceError("dense symmetric eigensolver failed", std::nan(""));
    EigenPairs out;
    out.values = solver.eigenvalues();
    out.vectors = solver.eigenvectors();
    normalize_signs(out.vectors);
    out.residuals.resize(out.values.size());
    const Eigen::MatrixXd av = a * out.vectors;
    for (Eigen::Index j = 0; j < out.values.size(); ++j) {
        out.residuals[j] = (av.col(j) - out.values[j] * out.vectors.col(j)).norm();
    }
    out.krylov_dimension = static_cast<int>(a.rows());
    return out;
}

EigenPairs smallest_eigenpairs(const Eigen::SparseMatrix<double>& a, const EigensolverOptions& options)
{
    const Eigen::Index n = a.rows();
    if (a.cols() != n) throw DomainError("eigensolver needs a square matrix");
    if (options.count < 1 || options.count > n) throw DomainError("requested mode count must lie in [1, n]");
    if (n <= options.dense_threshold || 4 * options.count > n) return dense_smallest(a, options);

    const int deflated = options.deflate ? 1 : 0;
    const int wanted = options.count - deflated;
    const Eigen::Index available = n - deflated;
    const int block = std::max(1, options.block_size);

    Eigen::SparseMatrix<double> shifted = a;
    for (Eigen::Index i = 0; i < n; ++i) shifted.coeffRef(i, i) -= options.shift;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> factor(shifted);
    if (factor.info() != Eigen::Success) throw ConvergenceError("shifted factorisation failed", std::nan(""));

    Rng rng(options.seed);
    OrthonormalBasis basis(n, options.deflate);
    auto random_vector = [&]() {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v[i] = rng.normal();
        return v;
    };

    EigenPairs out;
    if (wanted == 0) {
        out.values = Eigen::VectorXd::Constant(1, options.deflated_value);
        out.vectors = *options.deflate;
        out.residuals = residual_norms(a, out.values, out.vectors);
        return out;
    }

    for (int j = 0; j < block; ++j) basis.append(random_vector());
    Eigen::Index block_begin = 0;

    const auto round_up = [block](Eigen::Index k) { return ((k + block - 1) / block) * block; };
    Eigen::Index target = std::min(available, round_up(std::max<Eigen::Index>(2 * wanted, wanted + 3 * block)));
    const double column_cap = static_cast<double>(options.iteration_cap) * wanted;

    Eigen::VectorXd theta;
    Eigen::MatrixXd ritz;
    Eigen::VectorXd res;
    while (true) {
        // Grow the block Krylov space of (A - shift)^{-1}.
        while (basis.size() < target) {
            const Eigen::Index block_end = basis.size();
            if (block_begin == block_end) {
                if (!basis.append(random_vector())) break;
                continue;
            }
            const Eigen::MatrixXd w = factor.solve(basis.columns().middleCols(block_begin, block_end - block_begin).eval());
            block_begin = block_end;
            for (Eigen::Index j = 0; j < w.cols() && basis.size() < target; ++j) {
                if (!basis.append(w.col(j))) {
                    // Invariant subspace reached for this column; restart it randomly.
                    basis.append(random_vector());
                }
            }
        }

        const Eigen::Index k = basis.size();
        const auto q = basis.columns();
        const Eigen::MatrixXd aq = a * q;
        Eigen::MatrixXd h = q.transpose() * aq;
        h = 0.5 * (h + h.transpose()).eval();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> projected(h);
        const int take = static_cast<int>(std::min<Eigen::Index>(wanted, k));
        theta = projected.eigenvalues().head(take);
        const Eigen::MatrixXd u = projected.eigenvectors().leftCols(take);
        ritz = q * u;
        const Eigen::MatrixXd ar = aq * u;
        res.resize(take);
        bool converged = take == wanted;
        for (int j = 0; j < take; ++j) {
            res[j] = (ar.col(j) - theta[j] * ritz.col(j)).norm();
            if (res[j] > options.tolerance * std::max(1.0, std::abs(theta[j]))) converged = false;
        }
        if (converged || k >= available) break;
        if (static_cast<double>(k) >= column_cap) {
            throw ConvergenceError("eigensolver reached its iteration cap", res.maxCoeff());
        }
        const Eigen::Index grown = std::min(available, round_up(k + std::max<Eigen::Index>(block, k / 2)));
        if (grown <= k) break;
        target = grown;
    }

    out.krylov_dimension = static_cast<int>(basis.size());
    out.values.resize(options.count);
    out.vectors.resize(n, options.count);
    if (deflated) {
        out.values[0] = options.deflated_value;
        out.vectors.col(0) = *options.deflate;
    }
    out.values.tail(wanted) = theta;
    out.vectors.rightCols(wanted) = ritz;
    normalize_signs(out.vectors);
    out.residuals = residual_norms(a, out.values, out.vectors);
    return out;
}

} // namespace specgeo
