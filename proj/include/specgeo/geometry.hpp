#pragma once

#include "specgeo/manifold.hpp"
#include "specgeo/spectral.hpp"

#include <limits>
#include <vector>

namespace specgeo {

/// Dual-edge lengths |e*| = w_e |e| with the cotangent weight w_e; negative
/// values are floored at |e| / 10.
struct DualEdgeLengths
{
    std::vector<double> lengths;
    int floored_count = 0;
};

DualEdgeLengths dual_edge_lengths(const DiscreteManifold& mesh);

struct Cut
{
    /// Sorted vertex subset.
    std::vector<int> vertices;
    double boundary = 0.0;
    double volume = 0.0;
    double complement_volume = 0.0;
};

struct CutMeasure
{
    /// Sum of dual-edge lengths over crossing edges.
    double dual = 0.0;
    /// Sum of |e| / 3 over crossing edges.
    double proxy = 0.0;
    int crossing_edges = 0;
    int floored_edges = 0;
};

CutMeasure cut_boundary_measure(const DiscreteManifold& mesh, const std::vector<int>& subset);

Cut make_cut(const DiscreteManifold& mesh, const std::vector<int>& subset);

inline constexpr double cheeger_exponent = std::numeric_limits<double>::infinity();

enum class Exactness { exact, sweep_upper_bound };

struct IsoperimetryResult
{
    double value = 0.0;
    /// Infinity for the Cheeger constant.
    double exponent = cheeger_exponent;
    Cut witness;
    Exactness exactness = Exactness::exact;
};

/// Boundary / vol^(1 - 1/p); p = infinity gives boundary / vol.
double isoperimetric_ratio(double boundary, double volume, double exponent);

inline constexpr int cheeger_exact_max_vertices = 22;
inline constexpr int cheeger_exact_min_vertices = 4;

/// Exhaustive minimum over all subsets with vol <= total / 2.
IsoperimetryResult cheeger_exact(const DiscreteManifold& mesh);

inline constexpr int default_sweep_fields = 5;

IsoperimetryResult cheeger_sweep(const DiscreteManifold& mesh, const SpectralDecomposition& spec, int fields = default_sweep_fields);

IsoperimetryResult isoperimetric_sweep(
    const DiscreteManifold& mesh,
    const SpectralDecomposition& spec,
    double exponent,
    int fields = default_sweep_fields);

/// Volume-weighted mean of the field over the closed ball B(x, r).
double ball_average(const DiscreteManifold& mesh, const ScalarField& field, int x, double r);

struct FunctionalResult
{
    double value = 0.0;
    int argmax = 0;
    /// Upper integration limit (the diameter).
    double upper_limit = 0.0;
};

/// sup_x int_0^D w(r) (mean of q over B(x, r)) dr with w(r) = r exp(-r^2 / (7 R^2))
/// (weighted) or w(r) = r (unweighted), integrated exactly on each interval
/// where the ball is constant. D is the mesh diameter unless given.
FunctionalResult geometric_kato_functional(
    const DiscreteManifold& mesh,
    const ScalarField& q,
    double scale,
    bool weighted,
    double upper_limit = -1.0);

/// Same integral from a single source.
double geometric_kato_integral(
    const DiscreteManifold& mesh,
    const DistanceField& dist,
    const ScalarField& q,
    double scale,
    bool weighted,
    double upper_limit);

} // namespace specgeo
