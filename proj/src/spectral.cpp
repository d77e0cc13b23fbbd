#include "specgeo/eigensolver.hpp"
#include "specgeo/errors.hpp"
#include "specgeo/spectral.hpp"

#include <Eigen/LU>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace specgeo {

namespace {

void check_binding(const SpectralDecomposition& spec, const ScalarField& f)
{
    if (spec.source != SpectrumSource::mesh) throw DomainError("model spectra carry no vertex eigenfunctions");
    if (f.size() != spec.vertex_count()) throw DomainError("field does not match the manifold's vertex count");
    if (!f.label.empty() && !spec.label.empty() && f.label != spec.label) {
        throw DomainError("field bound to '" + f.label + "' applied to '" + spec.label + "'");
    }
}

Eigen::SparseMatrix<double> normalized_stiffness(const LaplaceOperator& op)
{
    const Eigen::VectorXd inv_sqrt = op.mass.cwiseSqrt().cwiseInverse();
    return inv_sqrt.asDiagonal() * op.stiffness * inv_sqrt.asDiagonal();
}

} // namespace

std::vector<double> cotangent_weights(const DiscreteManifold& mesh)
{
    std::vector<double> w(mesh.edge_count(), 0.0);
    std::vector<double> magnitude(mesh.edge_count(), 0.0);
    const auto& fe = mesh.face_edges();
    const auto& lengths = mesh.edge_lengths();
    const auto& areas = mesh.face_areas();
    for (int f = 0; f < mesh.face_count(); ++f) {
        const std::array<double, 3> l{lengths[fe[f][0]], lengths[fe[f][1]], lengths[fe[f][2]]};
        for (int c = 0; c < 3; ++c) {
            const double a = l[c], b = l[(c + 1) % 3], d = l[(c + 2) % 3];
            double numerator = b * b + d * d - a * a;
            // Right angles come out as rounding noise of either sign.
            if (std::abs(numerator) <= 1e-12 * a * a) numerator = 0.0;
            const double cot = numerator / (4.0 * areas[f]);
            w[fe[f][c]] += 0.5 * cot;
            magnitude[fe[f][c]] += 0.5 * std::abs(cot);
        }
    }
    // Cocircular quads give cot a + cot b = 0 up to rounding.
    for (size_t e = 0; e < w.size(); ++e) {
        if (std::abs(w[e]) <= 1e-12 * magnitude[e]) w[e] = 0.0;
    }
    return w;
}

LaplaceOperator assemble(const DiscreteManifold& mesh)
{
    const int n = mesh.vertex_count();
    const auto w = cotangent_weights(mesh);
    LaplaceOperator op;
    op.label = mesh.label();
    op.mass = Eigen::Map<const Eigen::VectorXd>(mesh.vertex_volumes().data(), n);

    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(2 * w.size() + n);
    std::vector<double> diagonal(n, 0.0);
    for (int e = 0; e < mesh.edge_count(); ++e) {
        const int u = mesh.edges()[e][0], v = mesh.edges()[e][1];
        if (w[e] < 0.0) ++op.negative_weight_count;
        triplets.emplace_back(u, v, -w[e]);
        triplets.emplace_back(v, u, -w[e]);
    }
    for (int v = 0; v < n; ++v) {
        double s = 0.0;
        for (const auto& [u, e] : mesh.neighbors(v)) s += w[e];
        diagonal[v] = s;
        triplets.emplace_back(v, v, s);
    }
    op.stiffness.resize(n, n);
    op.stiffness.setFromTriplets(triplets.begin(), triplets.end());
    op.stiffness.makeCompressed();
    return op;
}

int default_mode_count(int vertex_count) { return std::min(vertex_count, default_mode_cap); }

Eigen::VectorXd SpectralDecomposition::coefficients(const Eigen::VectorXd& f) const
{
    return eigenfunctions.transpose() * mass.cwiseProduct(f);
}

double SpectralDecomposition::truncation_indicator(double t) const
{
    return std::exp(-eigenvalues[mode_count() - 1] * t);
}

SpectralDecomposition decompose(const LaplaceOperator& op, const DecomposeOptions& options)
{
    const int n = op.vertex_count();
    if (options.mode_count < 1 || options.mode_count > n) throw DomainError("mode count must lie in [1, vertex count]");

    const Eigen::SparseMatrix<double> a = normalized_stiffness(op);
    const double volume = op.mass.sum();
    EigensolverOptions eo;
    eo.count = options.mode_count;
    eo.seed = options.seed;
    eo.tolerance = options.tolerance;
    eo.iteration_cap = options.iteration_cap;
    eo.deflate = op.mass.cwiseSqrt() / std::sqrt(volume);
    eo.deflated_value = 0.0;
    eo.shift = -1e-3 * a.diagonal().mean();
    const EigenPairs pairs = smallest_eigenpairs(a, eo);

    SpectralDecomposition spec;
    spec.source = SpectrumSource::mesh;
    spec.label = op.label;
    spec.mass = op.mass;
    spec.total_volume = volume;
    spec.seed = options.seed;
    spec.eigenvalues = pairs.values;
    spec.eigenvalues[0] = 0.0;
    spec.eigenfunctions = op.mass.cwiseSqrt().cwiseInverse().asDiagonal() * pairs.vectors;
    spec.eigenfunctions.col(0).setConstant(1.0 / std::sqrt(volume));
    for (Eigen::Index j = 1; j < spec.eigenfunctions.cols(); ++j) {
        Eigen::Index arg = 0;
        spec.eigenfunctions.col(j).cwiseAbs().maxCoeff(&arg);
        if (spec.eigenfunctions(arg, j) < 0.0) spec.eigenfunctions.col(j) *= -1.0;
    }
    const Eigen::MatrixXd kphi = op.stiffness * spec.eigenfunctions;
    spec.residuals.resize(spec.mode_count());
    for (int j = 0; j < spec.mode_count(); ++j) {
        const Eigen::VectorXd r = kphi.col(j) - spec.eigenvalues[j] * op.mass.cwiseProduct(spec.eigenfunctions.col(j));
        spec.residuals[j] = r.norm() / spec.eigenfunctions.col(j).norm();
    }
    return spec;
}

SpectralDecomposition decompose(const ModelManifold& model, int mode_count)
{
    if (mode_count < 1) throw DomainError("mode count must be at least 1");
    ModelManifold source = model;
    if (source.eigenvalues.size() < mode_count) {
        source = model.kind == ModelKind::round_sphere ? make_sphere_model(model.dimension, model.radius, mode_count)
                                                       : make_torus_model(model.periods, mode_count);
    }
    SpectralDecomposition spec;
    spec.source = SpectrumSource::model;
    spec.label = model.label;
    spec.total_volume = model.total_volume;
    spec.eigenvalues = source.eigenvalues.head(mode_count);
    spec.modes.assign(source.modes.begin(), source.modes.begin() + mode_count);
    spec.residuals = Eigen::VectorXd::Zero(mode_count);
    return spec;
}

HeatResult heat_apply(const SpectralDecomposition& spec, const ScalarField& f, double t)
{
    if (t < 0.0) throw DomainError("heat time must be nonnegative");
    check_binding(spec, f);
    const Eigen::VectorXd c = spec.coefficients(f.values);
    const Eigen::VectorXd decay = (-spec.eigenvalues.array() * t).exp();
    HeatResult out;
    out.field = ScalarField{spec.eigenfunctions * c.cwiseProduct(decay), f.label};
    out.truncation = spec.truncation_indicator(t);
    return out;
}

Eigen::VectorXd heat_time_derivative(const SpectralDecomposition& spec, const ScalarField& f, double t)
{
    check_binding(spec, f);
    const Eigen::VectorXd c = spec.coefficients(f.values);
    const Eigen::VectorXd rate = -(spec.eigenvalues.array() * (-spec.eigenvalues.array() * t).exp()).matrix();
    return spec.eigenfunctions * c.cwiseProduct(rate);
}

HeatKernelRow heat_kernel_row(const SpectralDecomposition& spec, double t, int x)
{
    if (spec.source != SpectrumSource::mesh) throw DomainError("model spectra carry no vertex eigenfunctions");
    if (!(t > 0.0)) throw DomainError("heat kernel time must be positive");
    if (x < 0 || x >= spec.vertex_count()) throw DomainError("vertex out of range");
    const Eigen::VectorXd decay = (-spec.eigenvalues.array() * t).exp();
    HeatKernelRow out;
    const Eigen::VectorXd weights = spec.eigenfunctions.row(x).transpose().cwiseProduct(decay);
    out.row = ScalarField{spec.eigenfunctions * weights, spec.label};
    out.truncation = spec.truncation_indicator(t);
    const double top = spec.eigenvalues[spec.mode_count() - 1];
    out.below_trusted_time = top > 0.0 && t < 1.0 / top;
    return out;
}

SchrodingerResult schrodinger_bottom(const LaplaceOperator& op, const ScalarField& q, double epsilon, std::uint64_t seed)
{
    const int n = op.vertex_count();
    if (q.size() != n) throw DomainError("potential does not match the manifold's vertex count");
    if (!q.label.empty() && !op.label.empty() && q.label != op.label) {
        throw DomainError("potential bound to '" + q.label + "' applied to '" + op.label + "'");
    }
    if (epsilon < 0.0) throw DomainError("epsilon must be nonnegative");

    SchrodingerResult out;
    out.epsilon = epsilon;
    out.potential_label = q.label;
    if (epsilon == 0.0) {
        Eigen::Index arg = 0;
        out.bottom = q.values.minCoeff(&arg);
        out.ground_state = Eigen::VectorXd::Zero(n);
        out.ground_state[arg] = 1.0 / std::sqrt(op.mass[arg]);
        out.positive = out.bottom > 0.0;
        return out;
    }

    Eigen::SparseMatrix<double> s = epsilon * normalized_stiffness(op);
    for (int i = 0; i < n; ++i) s.coeffRef(i, i) += q.values[i];
    EigensolverOptions eo;
    eo.count = 1;
    eo.seed = seed;
    eo.block_size = 8;
    eo.shift = q.values.minCoeff() - 1.0;
    const EigenPairs pairs = smallest_eigenpairs(s, eo);

    out.bottom = pairs.values[0];
    out.ground_state = op.mass.cwiseSqrt().cwiseInverse().cwiseProduct(pairs.vectors.col(0));
    if (op.mass.dot(out.ground_state) < 0.0) out.ground_state *= -1.0;
    out.positive = out.bottom > 0.0;
    out.residual = pairs.residuals[0];
    return out;
}

SchrodingerResult schrodinger_bottom(const ModelManifold& model, double constant_q, double epsilon)
{
    if (epsilon < 0.0) throw DomainError("epsilon must be nonnegative");
    SchrodingerResult out;
    out.epsilon = epsilon;
    out.potential_label = model.label;
    out.bottom = constant_q;
    out.ground_state = Eigen::VectorXd::Constant(1, 1.0 / std::sqrt(model.total_volume));
    out.positive = constant_q > 0.0;
    return out;
}

GradientField gradient_norm(const DiscreteManifold& mesh, const ScalarField& f)
{
    if (f.size() != mesh.vertex_count()) throw DomainError("field does not match the mesh");
    GradientField out;
    out.face_values.resize(mesh.face_count());
    const auto& faces = mesh.faces();
    const auto& fe = mesh.face_edges();
    const auto& lengths = mesh.edge_lengths();
    const auto& angles = mesh.corner_angles();
    for (int face = 0; face < mesh.face_count(); ++face) {
        // Intrinsic layout: corner 0 at the origin, corner 1 on the x axis.
        const double l01 = lengths[fe[face][2]];
        const double l02 = lengths[fe[face][1]];
        const double alpha = angles[face][0];
        const Eigen::Vector2d e1(l01, 0.0);
        const Eigen::Vector2d e2(l02 * std::cos(alpha), l02 * std::sin(alpha));
        Eigen::Matrix2d basis;
        basis.row(0) = e1.transpose();
        basis.row(1) = e2.transpose();
        const Eigen::Vector2d df(f[faces[face][1]] - f[faces[face][0]], f[faces[face][2]] - f[faces[face][0]]);
        out.face_values[face] = basis.inverse().operator*(df).norm();
    }
    Eigen::VectorXd acc = Eigen::VectorXd::Zero(mesh.vertex_count());
    Eigen::VectorXd weight = Eigen::VectorXd::Zero(mesh.vertex_count());
    const auto& areas = mesh.face_areas();
    for (int face = 0; face < mesh.face_count(); ++face) {
        for (int c = 0; c < 3; ++c) {
            acc[faces[face][c]] += areas[face] * out.face_values[face];
            weight[faces[face][c]] += areas[face];
        }
    }
    out.vertex_values = ScalarField{acc.cwiseQuotient(weight), f.label};
    return out;
}

double dirichlet_energy(const DiscreteManifold& mesh, const ScalarField& f)
{
    const auto g = gradient_norm(mesh, f);
    double e = 0.0;
    for (int face = 0; face < mesh.face_count(); ++face) e += mesh.face_areas()[face] * g.face_values[face] * g.face_values[face];
    return e;
}

double gradient_l1(const DiscreteManifold& mesh, const ScalarField& f)
{
    const auto g = gradient_norm(mesh, f);
    double e = 0.0;
    for (int face = 0; face < mesh.face_count(); ++face) e += mesh.face_areas()[face] * g.face_values[face];
    return e;
}

std::string spectrum_table(const SpectralDecomposition& spec)
{
    std::ostringstream out;
    out << "index\teigenvalue\tresidual\n" << std::setprecision(17);
    for (int i = 0; i < spec.mode_count(); ++i) out << i << '\t' << spec.eigenvalues[i] << '\t' << spec.residuals[i] << '\n';
    return out.str();
}

} // namespace specgeo
