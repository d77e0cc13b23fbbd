#include "specgeo/errors.hpp"
#include "specgeo/manifold.hpp"
#include "specgeo/parallel.hpp"

#include <algorithm>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>

namespace specgeo {

DistanceField geodesic_distances(const DiscreteManifold& mesh, int source)
{
    const int n = mesh.vertex_count();
    if (source < 0 || source >= n) throw DomainError("source vertex out of range");
    const auto& lengths = mesh.edge_lengths();
    DistanceField field;
    field.source = source;
    field.distance.assign(n, std::numeric_limits<double>::infinity());
    field.distance[source] = 0.0;

    using Item = std::pair<double, int>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
    queue.push({0.0, source});
    while (!queue.empty()) {
        const auto [d, v] = queue.top();
        queue.pop();
        if (d > field.distance[v]) continue;
        for (const auto& [u, e] : mesh.neighbors(v)) {
            const double candidate = d + lengths[e];
            if (candidate < field.distance[u]) {
                field.distance[u] = candidate;
                queue.push({candidate, u});
            }
        }
    }
    for (int v = 0; v < n; ++v) {
        if (!std::isfinite(field.distance[v])) throw DomainError("mesh is disconnected (vertex " + std::to_string(v) + " unreachable)");
    }
    return field;
}

double eccentricity(const DistanceField& dist)
{
    return *std::max_element(dist.distance.begin(), dist.distance.end());
}

DiameterResult diameter(const DiscreteManifold& mesh)
{
    const int n = mesh.vertex_count();
    DiameterResult result;
    if (n <= 3000) {
        std::vector<double> ecc(n);
        parallel_for(n, [&](int v) { ecc[v] = eccentricity(geodesic_distances(mesh, v)); });
        result.value = *std::max_element(ecc.begin(), ecc.end());
        result.exact = true;
        result.sources_used = n;
        return result;
    }

    // Farthest-point sampling: each new source is the vertex farthest from all
    // previous ones.
    constexpr int seeds = 64;
    std::vector<double> to_set(n, std::numeric_limits<double>::infinity());
    int source = 0;
    for (int s = 0; s < seeds; ++s) {
        const auto dist = geodesic_distances(mesh, source);
        result.value = std::max(result.value, eccentricity(dist));
        for (int v = 0; v < n; ++v) to_set[v] = std::min(to_set[v], dist.distance[v]);
        source = static_cast<int>(std::max_element(to_set.begin(), to_set.end()) - to_set.begin());
        // Also probe the farthest vertex from the current source.
        const int far = static_cast<int>(std::max_element(dist.distance.begin(), dist.distance.end()) - dist.distance.begin());
        if (s % 2 == 0) source = far;
    }
    result.exact = false;
    result.sources_used = seeds;
    return result;
}

std::vector<int> ball_indicator(const DistanceField& dist, double r)
{
    if (r < 0.0) throw DomainError("ball radius must be nonnegative");
    std::vector<int> ball;
    for (int v = 0; v < static_cast<int>(dist.distance.size()); ++v) {
        if (dist.distance[v] <= r) ball.push_back(v);
    }
    return ball;
}

int exact_rank(std::vector<std::vector<std::pair<int, long long>>> rows)
{
    using Row = std::vector<std::pair<int, long long>>;
    auto normalize = [](Row& row) {
        long long g = 0;
        for (const auto& [c, v] : row) g = std::gcd(g, v < 0 ? -v : v);
        if (g > 1) {
            for (auto& entry : row) entry.second /= g;
        }
    };
    auto checked = [](__int128 x) {
        if (x > std::numeric_limits<long long>::max() || x < std::numeric_limits<long long>::min()) {
            throw Error("integer overflow in exact elimination");
        }
        return static_cast<long long>(x);
    };

    std::vector<Row> pivots;
    std::vector<int> pivot_of_column;
    int rank = 0;
    for (auto& row : rows) {
        std::sort(row.begin(), row.end());
        row.erase(std::remove_if(row.begin(), row.end(), [](const auto& e) { return e.second == 0; }), row.end());
        while (!row.empty()) {
            const int lead = row.front().first;
            if (lead >= static_cast<int>(pivot_of_column.size())) pivot_of_column.resize(lead + 1, -1);
            const int p = pivot_of_column[lead];
            if (p < 0) {
                normalize(row);
                pivot_of_column[lead] = static_cast<int>(pivots.size());
                pivots.push_back(std::move(row));
                ++rank;
                break;
            }
            // Fraction-free step: row <- a_p * row - a_r * pivot.
            const Row& pivot = pivots[p];
            const long long ap = pivot.front().second, ar = row.front().second;
            Row combined;
            combined.reserve(row.size() + pivot.size());
            size_t i = 0, j = 0;
            while (i < row.size() || j < pivot.size()) {
                int c;
                __int128 value = 0;
                if (j >= pivot.size() || (i < row.size() && row[i].first < pivot[j].first)) {
                    c = row[i].first;
                    value = static_cast<__int128>(ap) * row[i].second;
                    ++i;
                } else if (i >= row.size() || pivot[j].first < row[i].first) {
                    c = pivot[j].first;
                    value = -static_cast<__int128>(ar) * pivot[j].second;
                    ++j;
                } else {
                    c = row[i].first;
                    value = static_cast<__int128>(ap) * row[i].second - static_cast<__int128>(ar) * pivot[j].second;
                    ++i;
                    ++j;
                }
                if (value != 0) combined.push_back({c, checked(value)});
            }
            normalize(combined);
            row = std::move(combined);
        }
    }
    return rank;
}

int betti_one(const DiscreteManifold& mesh)
{
    // Boundary of edge [a, b] (a < b) is b - a; boundary of an oriented face
    // (v0, v1, v2) is [v1 v2] - [v0 v2] + [v0 v1] with edges taken in sorted order.
    std::vector<std::vector<std::pair<int, long long>>> d1(mesh.edge_count());
    for (int e = 0; e < mesh.edge_count(); ++e) {
        d1[e] = {{mesh.edges()[e][0], -1}, {mesh.edges()[e][1], 1}};
    }
    const int rank_d1 = exact_rank(std::move(d1));

    // One row per edge over face columns; every row has exactly two entries,
    // which elimination preserves, so entries stay small.
    std::vector<std::vector<std::pair<int, long long>>> d2(mesh.edge_count());
    for (int f = 0; f < mesh.face_count(); ++f) {
        const auto& t = mesh.faces()[f];
        for (int c = 0; c < 3; ++c) {
            const int a = t[(c + 1) % 3], b = t[(c + 2) % 3];
            d2[mesh.face_edges()[f][c]].push_back({f, a < b ? 1 : -1});
        }
    }
    const int rank_d2 = exact_rank(std::move(d2));
    const int kernel_d1 = mesh.edge_count() - rank_d1;
    return kernel_d1 - rank_d2;
}

} // namespace specgeo
