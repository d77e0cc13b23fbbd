#include "specgeo/errors.hpp"
#include "specgeo/manifold.hpp"
#include "specgeo/rng.hpp"

#include <cmath>
#include <map>
#include <numbers>

namespace specgeo {

namespace {

struct TriangleSoup
{
    std::vector<Eigen::Vector3d> positions;
    std::vector<Face> faces;
};

TriangleSoup unit_icosphere(int subdivisions)
{
    const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleSoup soup;
    soup.positions = {
        {-1, phi, 0}, {1, phi, 0}, {-1, -phi, 0}, {1, -phi, 0},
        {0, -1, phi}, {0, 1, phi}, {0, -1, -phi}, {0, 1, -phi},
        {phi, 0, -1}, {phi, 0, 1}, {-phi, 0, -1}, {-phi, 0, 1},
    };
    for (auto& p : soup.positions) p.normalize();
    soup.faces = {
        {0, 11, 5}, {0, 5, 1}, {0, 1, 7}, {0, 7, 10}, {0, 10, 11},
        {1, 5, 9}, {5, 11, 4}, {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
        {3, 9, 4}, {3, 4, 2}, {3, 2, 6}, {3, 6, 8}, {3, 8, 9},
        {4, 9, 5}, {2, 4, 11}, {6, 2, 10}, {8, 6, 7}, {9, 8, 1},
    };

    for (int level = 0; level < subdivisions; ++level) {
        std::map<std::pair<int, int>, int> midpoint;
        auto split = [&](int a, int b) {
            const auto key = std::minmax(a, b);
            auto it = midpoint.find(key);
            if (it != midpoint.end()) return it->second;
            const int index = static_cast<int>(soup.positions.size());
            soup.positions.push_back((soup.positions[a] + soup.positions[b]).normalized());
            midpoint.emplace(key, index);
            return index;
        };
        std::vector<Face> refined;
        refined.reserve(4 * soup.faces.size());
        for (const auto& f : soup.faces) {
            const int ab = split(f[0], f[1]);
            const int bc = split(f[1], f[2]);
            const int ca = split(f[2], f[0]);
            refined.push_back({f[0], ab, ca});
            refined.push_back({f[1], bc, ab});
            refined.push_back({f[2], ca, bc});
            refined.push_back({ab, bc, ca});
        }
        soup.faces = std::move(refined);
    }
    return soup;
}

std::string format_number(double x)
{
    std::string s = std::to_string(x);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
}

} // namespace

DiscreteManifold make_icosphere(int subdivisions, double radius)
{
    if (subdivisions < 0 || subdivisions > 7) throw DomainError("icosphere subdivisions must lie in [0, 7]");
    if (!(radius > 0.0)) throw DomainError("icosphere radius must be positive");
    auto soup = unit_icosphere(subdivisions);
    for (auto& p : soup.positions) p *= radius;
    return DiscreteManifold::from_positions(
        std::move(soup.positions), std::move(soup.faces),
        "icosphere(" + std::to_string(subdivisions) + "," + format_number(radius) + ")");
}

DiscreteManifold make_flat_torus_mesh(double lx, double ly, int nx, int ny)
{
    if (nx < 3 || ny < 3) throw DomainError("flat torus grid needs nx, ny >= 3");
    if (!(lx > 0.0) || !(ly > 0.0)) throw DomainError("flat torus periods must be positive");
    const double hx = lx / nx, hy = ly / ny;
    std::vector<Eigen::Vector3d> positions;
    positions.reserve(static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) positions.push_back({i * hx, j * hy, 0.0});
    }
    auto id = [nx, ny](int i, int j) { return ((i % nx + nx) % nx) + nx * ((j % ny + ny) % ny); };
    std::vector<Face> faces;
    faces.reserve(2 * static_cast<size_t>(nx) * ny);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            faces.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            faces.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    }
    auto wrapped = [](int d, int n) {
        d = ((d % n) + n) % n;
        return d > n / 2 ? d - n : d;
    };
    auto length = [&](int u, int v) {
        const int di = wrapped(u % nx - v % nx, nx);
        const int dj = wrapped(u / nx - v / nx, ny);
        return std::hypot(di * hx, dj * hy);
    };
    return DiscreteManifold::from_lengths(
        std::move(positions), std::move(faces), length,
        "flat_torus(" + format_number(lx) + "," + format_number(ly) + "," + std::to_string(nx) + "," + std::to_string(ny) + ")");
}

DiscreteManifold make_bumpy_sphere(int subdivisions, double amplitude, int frequency, std::uint64_t seed)
{
    if (!(std::abs(amplitude) < 0.5)) throw DomainError("bumpy sphere amplitude must be below 0.5");
    if (frequency < 0) throw DomainError("bumpy sphere frequency must be nonnegative");
    if (subdivisions < 0 || subdivisions > 7) throw DomainError("icosphere subdivisions must lie in [0, 7]");

    // Radial profile: a normalised sum of seeded plane waves of wavenumber
    // `frequency` restricted to the unit sphere, so |profile| <= 1.
    constexpr int waves = 8;
    Rng rng(seed);
    std::array<Eigen::Vector3d, waves> directions;
    std::array<double, waves> phases{}, weights{};
    double weight_sum = 0.0;
    for (int w = 0; w < waves; ++w) {
        Eigen::Vector3d d(rng.normal(), rng.normal(), rng.normal());
        directions[w] = d.normalized();
        phases[w] = rng.uniform(0.0, 2.0 * std::numbers::pi);
        weights[w] = rng.normal();
        weight_sum += std::abs(weights[w]);
    }

    auto soup = unit_icosphere(subdivisions);
    for (auto& p : soup.positions) {
        double profile = 0.0;
        for (int w = 0; w < waves; ++w) {
            profile += weights[w] / weight_sum * std::cos(frequency * directions[w].dot(p) + phases[w]);
        }
        p *= 1.0 + amplitude * profile;
    }
    return DiscreteManifold::from_positions(
        std::move(soup.positions), std::move(soup.faces),
        "bumpy_sphere(" + std::to_string(subdivisions) + "," + format_number(amplitude) + "," + std::to_string(frequency) + "," +
            std::to_string(seed) + ")");
}

} // namespace specgeo
