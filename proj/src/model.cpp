#include "specgeo/errors.hpp"
#include "specgeo/model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <numeric>
#include <sstream>

namespace specgeo {

namespace {

long long binomial(int n, int k)
{
    if (k < 0 || k > n) return 0;
    long long r = 1;
    for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
    return r;
}

/// Dimension of degree-k spherical harmonics on S^n.
long long sphere_multiplicity(int n, int k)
{
    return binomial(n + k, n) - binomial(n + k - 2, n);
}

double sphere_volume(int n, double radius)
{
    return 2.0 * std::pow(std::numbers::pi, (n + 1) / 2.0) / std::tgamma((n + 1) / 2.0) * std::pow(radius, n);
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

} // namespace

double ModelManifold::diameter() const
{
    if (kind == ModelKind::round_sphere) return std::numbers::pi * radius;
    double s = 0.0;
    for (double l : periods) s += l * l;
    return 0.5 * std::sqrt(s);
}

double ModelManifold::ricci_lowest() const
{
    return kind == ModelKind::round_sphere ? (dimension - 1) / (radius * radius) : 0.0;
}

double ModelManifold::first_positive_eigenvalue() const
{
    for (Eigen::Index i = 0; i < eigenvalues.size(); ++i) {
        if (eigenvalues[i] > 0.0) return eigenvalues[i];
    }
    throw DomainError("model spectrum holds no positive eigenvalue; raise the mode count");
}

ModelManifold ModelManifold::scaled(double s) const
{
    if (!(s > 0.0)) throw DomainError("scale factor must be positive");
    if (kind == ModelKind::round_sphere) return make_sphere_model(dimension, radius * s, mode_count);
    std::vector<double> p = periods;
    for (double& l : p) l *= s;
    return make_torus_model(p, mode_count);
}

ModelManifold make_sphere_model(int dimension, double radius, int mode_count)
{
    if (dimension < 2) throw DomainError("model dimension must be at least 2");
    if (mode_count < 1) throw DomainError("mode count must be at least 1");
    if (!(radius > 0.0)) throw DomainError("sphere radius must be positive");
    ModelManifold m;
    m.kind = ModelKind::round_sphere;
    m.dimension = dimension;
    m.radius = radius;
    m.mode_count = mode_count;
    m.total_volume = sphere_volume(dimension, radius);
    std::vector<double> values;
    for (int k = 0; static_cast<int>(values.size()) < mode_count; ++k) {
        const long long mult = sphere_multiplicity(dimension, k);
        const double lambda = k * (k + dimension - 1.0) / (radius * radius);
        for (long long j = 0; j < mult; ++j) {
            values.push_back(lambda);
            m.modes.push_back(ModelMode{k, {}});
        }
    }
    m.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
    std::ostringstream label;
    label << "S^" << dimension << "(r=" << radius << ")";
    m.label = label.str();
    return m;
}

ModelManifold make_torus_model(const std::vector<double>& periods, int mode_count)
{
    const int n = static_cast<int>(periods.size());
    if (n < 2) throw DomainError("model dimension must be at least 2");
    if (mode_count < 1) throw DomainError("mode count must be at least 1");
    for (double l : periods) {
        if (!(l > 0.0)) throw DomainError("torus periods must be positive");
    }
    ModelManifold m;
    m.kind = ModelKind::flat_torus;
    m.dimension = n;
    m.periods = periods;
    m.mode_count = mode_count;
    m.total_volume = std::accumulate(periods.begin(), periods.end(), 1.0, std::multiplies<>());

    // Enumerate dual lattice vectors in growing boxes until the mode_count-th
    // eigenvalue is certainly below every vector outside the box.
    const double lmax = *std::max_element(periods.begin(), periods.end());
    for (int box = 1;; box *= 2) {
        std::vector<std::pair<double, std::vector<int>>> entries;
        std::vector<int> xi(n, -box);
        while (true) {
            double lambda = 0.0;
            for (int d = 0; d < n; ++d) {
                const double w = 2.0 * std::numbers::pi * xi[d] / periods[d];
                lambda += w * w;
            }
            entries.push_back({lambda, xi});
            int d = 0;
            while (d < n && xi[d] == box) xi[d++] = -box;
            if (d == n) break;
            ++xi[d];
        }
        std::sort(entries.begin(), entries.end());
        const double outside = std::pow(2.0 * std::numbers::pi * (box + 1) / lmax, 2);
        if (static_cast<int>(entries.size()) < mode_count || entries[mode_count - 1].first >= outside) continue;
        // Keep whole multiplicity blocks below the box bound.
        const double last = entries[mode_count - 1].first;
        std::vector<double> values;
        for (const auto& [lambda, vec] : entries) {
            if (lambda > last * (1.0 + 1e-12) + 1e-300) break;
            values.push_back(lambda);
            m.modes.push_back(ModelMode{0, vec});
        }
        m.eigenvalues = Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size()));
        break;
    }
    std::ostringstream label;
    label << "T^" << n << "(L=";
    for (int d = 0; d < n; ++d) label << (d ? "," : "") << periods[d];
    label << ")";
    m.label = label.str();
    return m;
}

ModelManifold make_model(const std::string& kind, int dimension, const std::vector<double>& radius_or_periods, int mode_count)
{
    if (kind == "sphere" || kind == "round-sphere" || kind == "round_sphere") {
        if (radius_or_periods.size() != 1) throw DomainError("sphere model takes a single radius");
        return make_sphere_model(dimension, radius_or_periods.front(), mode_count);
    }
    if (kind == "torus" || kind == "flat-torus" || kind == "flat_torus") {
        if (dimension < 2) throw DomainError("model dimension must be at least 2");
        std::vector<double> periods = radius_or_periods;
        if (periods.size() == 1) periods.assign(dimension, periods.front());
        if (static_cast<int>(periods.size()) != dimension) throw DomainError("torus model needs 1 or n periods");
        return make_torus_model(periods, mode_count);
    }
    throw DomainError("unsupported model kind '" + kind + "'");
}

ModelManifold parse_model_config(const std::string& text)
{
    std::map<std::string, std::pair<std::string, int>> values;
    std::istringstream in(text);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError("expected key = value", line_no);
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key != "kind" && key != "dim" && key != "radius" && key != "periods" && key != "modes") {
            throw ConfigError("unknown model key '" + key + "'", line_no);
        }
        if (values.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no);
        values[key] = {value, line_no};
    }
    auto require = [&](const std::string& key) -> std::pair<std::string, int> {
        auto it = values.find(key);
        if (it == values.end()) throw ConfigError("missing key '" + key + "'", 0);
        return it->second;
    };
    auto number = [](const std::pair<std::string, int>& v) {
        try {
            size_t used = 0;
            double x = std::stod(v.first, &used);
            if (used != v.first.size()) throw std::invalid_argument(v.first);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("not a number: '" + v.first + "'", v.second);
        }
    };

    const auto kind = require("kind");
    const int dim = static_cast<int>(number(require("dim")));
    const int modes = values.count("modes") ? static_cast<int>(number(values["modes"])) : 300;
    std::vector<double> params;
    if (values.count("radius") && values.count("periods")) throw ConfigError("give radius or periods, not both", values["periods"].second);
    if (values.count("radius")) {
        params.push_back(number(values["radius"]));
    } else if (values.count("periods")) {
        std::string list = values["periods"].first;
        std::replace(list.begin(), list.end(), ',', ' ');
        std::istringstream items(list);
        std::string item;
        while (items >> item) params.push_back(number({item, values["periods"].second}));
    } else {
        throw ConfigError("missing key 'radius' or 'periods'", 0);
    }
    try {
        return make_model(kind.first, dim, params, modes);
    } catch (const DomainError& e) {
        throw ConfigError(e.what(), kind.second);
    }
}

ModelManifold load_model_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open model config " + path, 0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_model_config(buffer.str());
}

} // namespace specgeo
