#include "specgeo/errors.hpp"
#include "specgeo/suite.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <numbers>
#include <set>
#include <sstream>

namespace specgeo {

namespace {

struct TheoremSpec
{
    std::string id;
    std::set<std::string> keys;
};

const std::vector<TheoremSpec>& theorem_specs()
{
    static const std::vector<TheoremSpec> specs{
        {"sobolev", {"delta", "trials", "seed"}},
        {"diameter", {"epsilon"}},
        {"lichnerowicz", {"k"}},
        {"lichnerowicz_kato", {"k", "lambda", "T"}},
        {"gradient_estimate", {"trials", "seed"}},
        {"pseudo_poincare", {"trials", "seed"}},
        {"buser", {}},
        {"isoperimetric", {"case", "p"}},
        {"geometric_kato", {"R"}},
        {"betti", {}},
    };
    return specs;
}

const std::map<std::string, std::set<std::string>>& generator_keys()
{
    static const std::map<std::string, std::set<std::string>> keys{
        {"icosphere", {"subdivisions", "radius"}},
        {"flat_torus", {"lx", "ly", "nx", "ny"}},
        {"torus", {"lx", "ly", "nx", "ny"}},
        {"bumpy", {"subdivisions", "amplitude", "frequency", "seed"}},
        {"file", {"path", "format"}},
        {"model", {"kind", "dim", "radius", "periods", "modes", "path"}},
    };
    return keys;
}

std::vector<std::string> split_whitespace(const std::string& line)
{
    std::istringstream in(line);
    std::vector<std::string> tokens;
    std::string t;
    while (in >> t) tokens.push_back(t);
    return tokens;
}

/// Accepts plain numbers and multiples of pi ("pi", "2pi", "0.5pi").
double parse_number(const std::string& text, int line)
{
    std::string s = text;
    double factor = 1.0;
    if (s.size() >= 2 && s.compare(s.size() - 2, 2, "pi") == 0) {
        factor = std::numbers::pi;
        s = s.substr(0, s.size() - 2);
        if (s.empty()) return factor;
    }
    try {
        size_t used = 0;
        const double x = std::stod(s, &used);
        if (used != s.size() || !std::isfinite(x)) throw std::invalid_argument(s);
        return x * factor;
    } catch (const std::exception&) {
        throw ConfigError("not a number: '" + text + "'", line);
    }
}

int parse_integer(const std::string& text, int line)
{
    const double x = parse_number(text, line);
    if (x != std::floor(x) || std::abs(x) > 1e9) throw ConfigError("not an integer: '" + text + "'", line);
    return static_cast<int>(x);
}

std::uint64_t parse_seed(const std::string& text, int line)
{
    try {
        size_t used = 0;
        const unsigned long long x = std::stoull(text, &used);
        if (used != text.size() || text.front() == '-') throw std::invalid_argument(text);
        return x;
    } catch (const std::exception&) {
        throw ConfigError("not a seed: '" + text + "'", line);
    }
}

std::map<std::string, std::string> parse_pairs(
    const std::vector<std::string>& tokens,
    size_t first,
    const std::set<std::string>& allowed,
    const std::string& owner,
    int line)
{
    std::map<std::string, std::string> params;
    for (size_t i = first; i < tokens.size(); ++i) {
        const auto eq = tokens[i].find('=');
        if (eq == std::string::npos || eq == 0) throw ConfigError("expected key=value, got '" + tokens[i] + "'", line);
        const std::string key = tokens[i].substr(0, eq);
        if (!allowed.count(key)) throw ConfigError("unknown parameter '" + key + "' for " + owner, line);
        if (params.count(key)) throw ConfigError("duplicate parameter '" + key + "'", line);
        params[key] = tokens[i].substr(eq + 1);
    }
    return params;
}

double number_or(const std::map<std::string, std::string>& p, const std::string& key, double fallback, int line)
{
    const auto it = p.find(key);
    return it == p.end() ? fallback : parse_number(it->second, line);
}

int integer_or(const std::map<std::string, std::string>& p, const std::string& key, int fallback, int line)
{
    const auto it = p.find(key);
    return it == p.end() ? fallback : parse_integer(it->second, line);
}

std::uint64_t seed_or(const std::map<std::string, std::string>& p, std::uint64_t fallback, int line)
{
    const auto it = p.find("seed");
    return it == p.end() ? fallback : parse_seed(it->second, line);
}

TheoremReport run_check(const CheckSpec& check, const Subject& subject, std::uint64_t seed)
{
    const auto& p = check.params;
    const int line = check.line;
    if (check.theorem == "sobolev") {
        return verify_sobolev(subject, number_or(p, "delta", 1.0, line), integer_or(p, "trials", 200, line), seed_or(p, seed, line));
    }
    if (check.theorem == "diameter") return verify_diameter(subject, number_or(p, "epsilon", 0.1, line));
    if (check.theorem == "lichnerowicz") return verify_lichnerowicz(subject, number_or(p, "k", 1.0, line));
    if (check.theorem == "lichnerowicz_kato") {
        return verify_lichnerowicz_kato(
            subject, number_or(p, "k", 0.9, line), number_or(p, "lambda", 0.9, line), number_or(p, "T", 1.0, line));
    }
    if (check.theorem == "gradient_estimate") {
        return verify_gradient_estimate(subject, integer_or(p, "trials", 10, line), seed_or(p, seed, line));
    }
    if (check.theorem == "pseudo_poincare") {
        return verify_pseudo_poincare(subject, integer_or(p, "trials", 20, line), seed_or(p, seed, line));
    }
    if (check.theorem == "buser") return verify_buser(subject);
    if (check.theorem == "isoperimetric") {
        return verify_isoperimetric(subject, integer_or(p, "case", 1, line), number_or(p, "p", 2.0, line));
    }
    if (check.theorem == "geometric_kato") return verify_geometric_kato(subject, number_or(p, "R", 0.0, line));
    if (check.theorem == "betti") return verify_betti(subject);
    throw ConfigError("unknown theorem id '" + check.theorem + "'", line);
}

nlohmann::json optional_number(const std::optional<double>& x)
{
    if (!x || !std::isfinite(*x)) return nullptr;
    return *x;
}

} // namespace

const std::vector<std::string>& theorem_ids()
{
    static const std::vector<std::string> ids = [] {
        std::vector<std::string> v;
        for (const auto& s : theorem_specs()) v.push_back(s.id);
        return v;
    }();
    return ids;
}

SuiteConfig parse_suite_config(const std::string& text)
{
    SuiteConfig config;
    std::set<std::string> names;
    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        const auto hash = raw.find('#');
        if (hash != std::string::npos) raw = raw.substr(0, hash);
        const auto tokens = split_whitespace(raw);
        if (tokens.empty()) continue;
        const std::string& head = tokens[0];
        if (head == "seed") {
            if (tokens.size() != 2) throw ConfigError("expected 'seed N'", line);
            config.seed = parse_seed(tokens[1], line);
        } else if (head == "modes") {
            if (tokens.size() != 2) throw ConfigError("expected 'modes N'", line);
            config.modes = parse_integer(tokens[1], line);
            if (config.modes < 2) throw ConfigError("modes must be at least 2", line);
        } else if (head == "manifold") {
            if (tokens.size() < 3) throw ConfigError("expected 'manifold NAME GENERATOR key=value...'", line);
            const auto gen = generator_keys().find(tokens[2]);
            if (gen == generator_keys().end()) throw ConfigError("unknown generator '" + tokens[2] + "'", line);
            if (!names.insert(tokens[1]).second) throw ConfigError("duplicate manifold name '" + tokens[1] + "'", line);
            config.manifolds.push_back(
                ManifoldSpec{tokens[1], tokens[2], parse_pairs(tokens, 3, gen->second, tokens[2], line), line});
        } else if (head == "check") {
            if (tokens.size() < 3) throw ConfigError("expected 'check THEOREM MANIFOLD key=value...'", line);
            const auto& specs = theorem_specs();
            const auto th = std::find_if(specs.begin(), specs.end(), [&](const auto& s) { return s.id == tokens[1]; });
            if (th == specs.end()) throw ConfigError("unknown theorem id '" + tokens[1] + "'", line);
            if (!names.count(tokens[2])) throw ConfigError("unknown manifold '" + tokens[2] + "'", line);
            config.checks.push_back(CheckSpec{tokens[1], tokens[2], parse_pairs(tokens, 3, th->keys, tokens[1], line), line});
        } else {
            throw ConfigError("unknown directive '" + head + "'", line);
        }
    }
    return config;
}

SuiteConfig load_suite_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open suite config " + path.string(), 0);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_suite_config(buffer.str());
}

std::string default_suite_text()
{
    return R"(# Default verification suite.
seed 42
modes 300

manifold icosphere icosphere subdivisions=4 radius=1
manifold torus flat_torus lx=2pi ly=2pi nx=32 ny=32
manifold bumpy bumpy subdivisions=4 amplitude=0.3 frequency=4 seed=7
manifold s3 model kind=sphere dim=3 radius=1
manifold t3 model kind=torus dim=3 periods=2pi

check sobolev s3 delta=1 trials=200
check sobolev t3 delta=1 trials=200
check diameter s3 epsilon=0.1
check diameter t3 epsilon=0.1
check lichnerowicz s3 k=1
check lichnerowicz icosphere k=1
check lichnerowicz_kato icosphere k=0.9 lambda=0.9 T=1
check lichnerowicz_kato bumpy k=0.5 lambda=0.5 T=1
check gradient_estimate icosphere trials=10
check pseudo_poincare icosphere trials=20
check pseudo_poincare torus trials=20
check buser icosphere
check buser torus
check buser bumpy
check isoperimetric icosphere case=1
check isoperimetric bumpy case=1
check isoperimetric bumpy case=2 p=2
check geometric_kato bumpy
check betti icosphere
check betti torus
check betti bumpy
)";
}

SuiteConfig default_suite_config() { return parse_suite_config(default_suite_text()); }

ManifoldSpec parse_manifold_argument(const std::string& argument)
{
    const auto colon = argument.find(':');
    ManifoldSpec spec;
    spec.name = argument;
    spec.generator = argument.substr(0, colon);
    const auto gen = generator_keys().find(spec.generator);
    if (gen == generator_keys().end()) throw ConfigError("unknown generator '" + spec.generator + "'", 0);
    if (colon == std::string::npos) return spec;
    const std::string rest = argument.substr(colon + 1);
    if ((spec.generator == "file" || spec.generator == "model") && rest.find('=') == std::string::npos) {
        spec.params["path"] = rest;
        return spec;
    }
    std::vector<std::string> tokens;
    std::string item;
    std::istringstream in(rest);
    while (std::getline(in, item, ',')) {
        if (!item.empty()) tokens.push_back(item);
    }
    // "periods=a,b,c": bare numbers continue the previous list value.
    std::vector<std::string> merged;
    for (const auto& t : tokens) {
        if (t.find('=') == std::string::npos && !merged.empty()) {
            merged.back() += "," + t;
        } else {
            merged.push_back(t);
        }
    }
    spec.params = parse_pairs(merged, 0, gen->second, spec.generator, 0);
    return spec;
}

bool is_model_spec(const ManifoldSpec& spec) { return spec.generator == "model"; }

DiscreteManifold build_mesh(const ManifoldSpec& spec)
{
    const auto& p = spec.params;
    const int line = spec.line;
    if (spec.generator == "icosphere") {
        return make_icosphere(integer_or(p, "subdivisions", 4, line), number_or(p, "radius", 1.0, line));
    }
    if (spec.generator == "flat_torus" || spec.generator == "torus") {
        return make_flat_torus_mesh(
            number_or(p, "lx", 2.0 * std::numbers::pi, line),
            number_or(p, "ly", 2.0 * std::numbers::pi, line),
            integer_or(p, "nx", 32, line),
            integer_or(p, "ny", 32, line));
    }
    if (spec.generator == "bumpy") {
        return make_bumpy_sphere(
            integer_or(p, "subdivisions", 4, line),
            number_or(p, "amplitude", 0.3, line),
            integer_or(p, "frequency", 4, line),
            seed_or(p, 7, line));
    }
    if (spec.generator == "file") {
        const auto it = p.find("path");
        if (it == p.end()) throw ConfigError("file manifold needs path=...", line);
        const auto fmt = p.find("format");
        if (fmt == p.end()) return load_mesh(it->second);
        if (fmt->second == "off") return load_mesh(it->second, MeshFormat::off);
        if (fmt->second == "obj") return load_mesh(it->second, MeshFormat::obj);
        throw ConfigError("unknown mesh format '" + fmt->second + "'", line);
    }
    throw ConfigError("'" + spec.generator + "' does not describe a mesh", line);
}

ModelManifold build_model(const ManifoldSpec& spec, int modes)
{
    const auto& p = spec.params;
    const int line = spec.line;
    if (!is_model_spec(spec)) throw ConfigError("'" + spec.generator + "' does not describe a model", line);
    if (p.count("path")) {
        if (p.size() != 1) throw ConfigError("model path excludes other parameters", line);
        return load_model_config(p.at("path"));
    }
    const auto kind = p.find("kind");
    if (kind == p.end()) throw ConfigError("model needs kind=sphere|torus", line);
    const int dim = integer_or(p, "dim", 3, line);
    std::vector<double> values;
    if (p.count("radius")) values.push_back(parse_number(p.at("radius"), line));
    if (p.count("periods")) {
        std::istringstream in(p.at("periods"));
        std::string item;
        while (std::getline(in, item, ',')) values.push_back(parse_number(item, line));
    }
    if (values.empty()) values.push_back(kind->second == "sphere" ? 1.0 : 2.0 * std::numbers::pi);
    try {
        return make_model(kind->second, dim, values, integer_or(p, "modes", modes, line));
    } catch (const DomainError& e) {
        throw ConfigError(e.what(), line);
    }
}

Subject build_subject(const ManifoldSpec& spec, int modes, std::uint64_t seed)
{
    if (is_model_spec(spec)) return prepare(build_model(spec, modes));
    const DiscreteManifold mesh = build_mesh(spec);
    return prepare(mesh, std::min(modes, mesh.vertex_count()), seed);
}

std::vector<TheoremReport> run_suite(const SuiteConfig& config)
{
    std::map<std::string, Subject> subjects;
    std::vector<TheoremReport> reports;
    reports.reserve(config.checks.size());
    for (const auto& check : config.checks) {
        auto it = subjects.find(check.manifold);
        if (it == subjects.end()) {
            const auto spec = std::find_if(
                config.manifolds.begin(), config.manifolds.end(), [&](const auto& m) { return m.name == check.manifold; });
            if (spec == config.manifolds.end()) throw ConfigError("unknown manifold '" + check.manifold + "'", check.line);
            try {
                it = subjects.emplace(check.manifold, build_subject(*spec, config.modes, config.seed)).first;
            } catch (const MeshError& e) {
                throw ConfigError(e.what(), spec->line);
            } catch (const DomainError& e) {
                throw ConfigError(e.what(), spec->line);
            }
        }
        try {
            TheoremReport r = run_check(check, it->second, config.seed);
            if (r.seed == 0) r.seed = config.seed;
            reports.push_back(std::move(r));
        } catch (const DomainError& e) {
            throw ConfigError(e.what(), check.line);
        }
    }
    return reports;
}

int suite_exit_code(const std::vector<TheoremReport>& reports)
{
    for (const auto& r : reports) {
        if (r.status == Status::fail) return 1;
    }
    return 0;
}

std::string serialize_reports(const std::vector<TheoremReport>& reports, const SuiteConfig& config)
{
    nlohmann::json doc;
    doc["seed"] = config.seed;
    doc["modes"] = config.modes;
    nlohmann::json list = nlohmann::json::array();
    for (const auto& r : reports) {
        nlohmann::json j;
        j["theorem"] = r.theorem;
        j["manifold"] = r.manifold;
        j["status"] = to_string(r.status);
        j["margin"] = optional_number(r.margin);
        j["seed"] = r.seed;
        j["hypothesis"] = nlohmann::json::object();
        for (const auto& [k, v] : r.hypothesis) j["hypothesis"][k] = optional_number(v);
        j["conclusion"] = nlohmann::json::object();
        for (const auto& [k, v] : r.conclusion) j["conclusion"][k] = optional_number(v);
        j["tolerances"] = nlohmann::json::object();
        for (const auto& [k, v] : r.tolerances) j["tolerances"][k] = v;
        j["notes"] = r.notes;
        list.push_back(std::move(j));
    }
    doc["reports"] = std::move(list);
    doc["exit_code"] = suite_exit_code(reports);
    return doc.dump(2) + "\n";
}

std::string report_table(const std::vector<TheoremReport>& reports)
{
    std::ostringstream out;
    out << "theorem\tmanifold\tstatus\tmargin\n" << std::setprecision(10);
    for (const auto& r : reports) {
        out << r.theorem << '\t' << r.manifold << '\t' << to_string(r.status) << '\t';
        if (r.margin) {
            out << *r.margin;
        } else {
            out << '-';
        }
        out << '\n';
    }
    return out.str();
}

} // namespace specgeo
