#include "specgeo/constants.hpp"
#include "specgeo/errors.hpp"
#include "specgeo/geometry.hpp"
#include "specgeo/kato.hpp"
#include "specgeo/suite.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

using namespace specgeo;

namespace {

constexpr int exit_input_error = 2;

struct Common
{
    std::string input;
    int modes = default_mode_cap;
    std::uint64_t seed = default_seed;
    std::string json_path;
};

void add_common(CLI::App* cmd, Common& c, bool with_input = true)
{
    if (with_input) {
        cmd->add_option("--input", c.input,
               "Manifold: icosphere:subdivisions=4,radius=1 | torus:lx=2pi,ly=2pi,nx=32,ny=32 | "
               "bumpy:subdivisions=4,amplitude=0.3,frequency=4,seed=7 | file:PATH | model:PATH | "
               "model:kind=sphere,dim=3,radius=1")
            ->required();
    }
    cmd->add_option("--modes", c.modes, "Number of eigenpairs, capped at the vertex count")
        ->envname("SPECGEO_MODES")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", c.seed, "Seed of the eigensolver start and random fields")
        ->envname("SPECGEO_SEED")
        ->capture_default_str();
    cmd->add_option("--json", c.json_path, "Write a structured JSON document to this path ('-' for stdout)");
}

void emit_json(const std::string& path, const nlohmann::json& doc)
{
    if (path.empty()) return;
    const std::string text = doc.dump(2) + "\n";
    if (path == "-") {
        std::cout << text;
        return;
    }
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot write " + path, 0);
    out << text;
}

std::string fmt(double x)
{
    std::ostringstream s;
    s << std::setprecision(12) << x;
    return s.str();
}

int cmd_mesh_info(const Common& c)
{
    const ManifoldSpec spec = parse_manifold_argument(c.input);
    nlohmann::json doc;
    std::ostringstream table;
    if (is_model_spec(spec)) {
        const ModelManifold model = build_model(spec, std::max(c.modes, 2));
        doc = {{"label", model.label},
               {"kind", model.kind == ModelKind::round_sphere ? "round-sphere" : "flat-torus"},
               {"dimension", model.dimension},
               {"volume", model.total_volume},
               {"diameter", model.diameter()},
               {"ricci_lowest", model.ricci_lowest()},
               {"lambda1", model.first_positive_eigenvalue()}};
    } else {
        const DiscreteManifold mesh = build_mesh(spec);
        const ScalarField rho = curvature_lowest(mesh);
        const DiameterResult diam = diameter(mesh);
        double gauss_bonnet = 0.0;
        for (int v = 0; v < mesh.vertex_count(); ++v) gauss_bonnet += rho[v] * mesh.vertex_volumes()[v];
        gauss_bonnet -= 2.0 * std::numbers::pi * mesh.euler_characteristic();
        doc = {{"label", mesh.label()},
               {"vertices", mesh.vertex_count()},
               {"edges", mesh.edge_count()},
               {"faces", mesh.face_count()},
               {"volume", mesh.total_volume()},
               {"diameter", diam.value},
               {"diameter_exact", diam.exact},
               {"euler_characteristic", mesh.euler_characteristic()},
               {"betti_one", betti_one(mesh)},
               {"rho_min", rho.values.minCoeff()},
               {"rho_mean", rho.values.mean()},
               {"rho_max", rho.values.maxCoeff()},
               {"gauss_bonnet_residual", gauss_bonnet},
               {"negative_cotangent_weights", assemble(mesh).negative_weight_count}};
    }
    for (const auto& [key, value] : doc.items()) {
        table << key << '\t';
        if (value.is_number_float()) {
            table << fmt(value.get<double>());
        } else if (value.is_string()) {
            table << value.get<std::string>();
        } else {
            table << value.dump();
        }
        if (key == "diameter" && doc.contains("diameter_exact") && !doc["diameter_exact"].get<bool>()) table << " (lower bound)";
        table << '\n';
    }
    if (c.json_path != "-") std::cout << table.str();
    emit_json(c.json_path, doc);
    return 0;
}

SpectralDecomposition spectrum_of(const ManifoldSpec& spec, const Common& c, Subject* subject = nullptr)
{
    if (is_model_spec(spec)) {
        const ModelManifold model = build_model(spec, c.modes);
        if (subject) *subject = prepare(model);
        return decompose(model, c.modes);
    }
    const DiscreteManifold mesh = build_mesh(spec);
    if (c.modes > mesh.vertex_count()) std::cerr << "note: mode count capped at " << mesh.vertex_count() << "\n";
    Subject s = prepare(mesh, std::min(c.modes, mesh.vertex_count()), c.seed);
    SpectralDecomposition spec_out = s.mesh().spec;
    if (subject) *subject = std::move(s);
    return spec_out;
}

int cmd_spectrum(const Common& c)
{
    const ManifoldSpec spec = parse_manifold_argument(c.input);
    const SpectralDecomposition decomposition = spectrum_of(spec, c);
    if (c.json_path != "-") std::cout << spectrum_table(decomposition);
    nlohmann::json doc;
    doc["label"] = decomposition.label;
    doc["seed"] = c.seed;
    doc["eigenvalues"] = std::vector<double>(decomposition.eigenvalues.begin(), decomposition.eigenvalues.end());
    doc["residuals"] = std::vector<double>(decomposition.residuals.begin(), decomposition.residuals.end());
    emit_json(c.json_path, doc);
    return 0;
}

struct KatoArgs
{
    std::string potential = "ricci-neg";
    double horizon = 1.0;
    std::optional<double> threshold;
    std::vector<double> series;
};

/// Potential on a mesh subject, or the constant value on a model.
std::variant<ScalarField, double> build_potential(const Subject& subject, const std::string& text)
{
    const auto colon = text.find(':');
    const std::string kind = text.substr(0, colon);
    const std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
    auto number = [&](const std::string& s) {
        try {
            size_t used = 0;
            const double x = std::stod(s, &used);
            if (used != s.size()) throw std::invalid_argument(s);
            return x;
        } catch (const std::exception&) {
            throw ConfigError("bad potential argument '" + s + "'", 0);
        }
    };
    double shift = 0.0;
    if (kind == "ricci-neg") {
        if (!arg.empty()) throw ConfigError("ricci-neg takes no argument", 0);
    } else if (kind == "shifted") {
        shift = number(arg);
    } else if (kind == "constant") {
        const double value = number(arg);
        if (value < 0.0) throw DomainError("potential must be nonnegative");
        if (!subject.is_mesh()) return value;
        return subject.mesh().mesh.make_field(Eigen::VectorXd::Constant(subject.mesh().mesh.vertex_count(), value));
    } else if (kind == "file") {
        if (!subject.is_mesh()) throw ConfigError("field files need a mesh input", 0);
        std::ifstream in(arg);
        if (!in) throw ConfigError("cannot open potential file " + arg, 0);
        std::vector<double> values;
        std::string token;
        while (in >> token) values.push_back(number(token));
        const auto& mesh = subject.mesh().mesh;
        if (static_cast<int>(values.size()) != mesh.vertex_count()) {
            throw ConfigError("potential file has " + std::to_string(values.size()) + " values for " +
                                  std::to_string(mesh.vertex_count()) + " vertices",
                              0);
        }
        return mesh.make_field(Eigen::Map<Eigen::VectorXd>(values.data(), static_cast<Eigen::Index>(values.size())));
    } else {
        throw ConfigError("unknown potential '" + text + "' (ricci-neg | shifted:LAMBDA | constant:C | file:PATH)", 0);
    }
    if (!subject.is_mesh()) return std::max(0.0, shift - subject.model().ricci_lowest());
    const ScalarField& rho = subject.mesh().rho;
    return negative_part(ScalarField{rho.values.array() - shift, rho.label});
}

int cmd_kato(const Common& c, const KatoArgs& k)
{
    const ManifoldSpec spec = parse_manifold_argument(c.input);
    Subject subject;
    const SpectralDecomposition decomposition = spectrum_of(spec, c, &subject);
    const auto potential = build_potential(subject, k.potential);
    const bool field = std::holds_alternative<ScalarField>(potential);
    auto kato_at = [&](double t) {
        return field ? kato_constant(decomposition, std::get<ScalarField>(potential), t)
                     : kato_constant(decomposition, std::get<double>(potential), t);
    };

    nlohmann::json doc;
    doc["label"] = decomposition.label;
    doc["potential"] = k.potential;
    std::ostringstream table;
    if (k.threshold) {
        const double d = subject.is_mesh() ? subject.mesh().diam.value : subject.model().diameter();
        const double cap = 10.0 * d * d;
        ThresholdResult t;
        if (field) {
            t = kato_first_threshold(decomposition, std::get<ScalarField>(potential), *k.threshold, cap);
        } else {
            const double value = std::get<double>(potential);
            t.cap = cap;
            t.capped = value * cap <= *k.threshold;
            t.horizon = t.capped ? cap : *k.threshold / value;
            t.kato_at_horizon = value * t.horizon;
        }
        doc["target"] = *k.threshold;
        doc["T_star"] = t.horizon;
        doc["capped"] = t.capped;
        doc["cap"] = t.cap;
        doc["kappa_at_T_star"] = t.kato_at_horizon;
        table << "target\t" << fmt(*k.threshold) << "\nT_star\t" << fmt(t.horizon) << (t.capped ? " (cap; never exceeds target)" : "")
              << "\ncap\t" << fmt(t.cap) << "\nkappa_at_T_star\t" << fmt(t.kato_at_horizon) << '\n';
    } else if (!k.series.empty()) {
        table << "T\tkappa\n";
        nlohmann::json rows = nlohmann::json::array();
        for (double t : k.series) {
            const double v = kato_at(t).value;
            table << fmt(t) << '\t' << fmt(v) << '\n';
            rows.push_back({t, v});
        }
        doc["series"] = rows;
    } else {
        const KatoResult r = kato_at(k.horizon);
        doc["T"] = k.horizon;
        doc["kappa"] = r.value;
        doc["argmax"] = r.argmax;
        doc["truncation"] = r.truncation;
        table << "T\t" << fmt(k.horizon) << "\nkappa\t" << fmt(r.value) << "\nargmax\t" << r.argmax << "\ntruncation\t"
              << fmt(r.truncation) << '\n';
    }
    if (c.json_path != "-") std::cout << table.str();
    emit_json(c.json_path, doc);
    return 0;
}

struct ConstantsArgs
{
    int n_min = 3;
    int n_max = 10;
    double delta_min = 0.5;
    double delta_max = 1.0;
    int delta_steps = 11;
    std::optional<int> n;
    std::optional<double> delta;
};

int cmd_constants(const ConstantsArgs& a)
{
    const int n_min = a.n.value_or(a.n_min);
    const int n_max = a.n.value_or(a.n_max);
    if (a.delta) {
        std::cout << constants_table(n_min, n_max, *a.delta, *a.delta, 1);
    } else {
        std::cout << constants_table(n_min, n_max, a.delta_min, a.delta_max, a.delta_steps);
    }
    return 0;
}

struct VerifyArgs
{
    std::string config_path;
    std::string suite;
    std::string theorem;
    std::map<std::string, std::string> params;
    bool seed_given = false;
    bool modes_given = false;
};

int cmd_verify(const Common& c, const VerifyArgs& v)
{
    SuiteConfig config;
    const int sources = (v.config_path.empty() ? 0 : 1) + (v.suite.empty() ? 0 : 1) + (v.theorem.empty() ? 0 : 1);
    if (sources != 1) throw ConfigError("give exactly one of CONFIG, --suite default, or --theorem with --input", 0);
    if (!v.suite.empty()) {
        if (v.suite != "default") throw ConfigError("unknown suite '" + v.suite + "'", 0);
        config = default_suite_config();
    } else if (!v.config_path.empty()) {
        config = load_suite_config(v.config_path);
    } else {
        if (c.input.empty()) throw ConfigError("--theorem needs --input", 0);
        std::ostringstream text;
        text << "manifold subject " << c.input.substr(0, c.input.find(':'));
        ManifoldSpec spec = parse_manifold_argument(c.input);
        for (const auto& [key, value] : spec.params) text << ' ' << key << '=' << value;
        text << "\ncheck " << v.theorem << " subject";
        for (const auto& [key, value] : v.params) text << ' ' << key << '=' << value;
        text << '\n';
        config = parse_suite_config(text.str());
    }
    if (v.seed_given || std::getenv("SPECGEO_SEED")) config.seed = c.seed;
    if (v.modes_given || std::getenv("SPECGEO_MODES")) config.modes = c.modes;

    const auto reports = run_suite(config);
    const std::string document = serialize_reports(reports, config);
    if (c.json_path.empty() || c.json_path != "-") std::cout << report_table(reports);
    if (c.json_path == "-") {
        std::cout << document;
    } else if (!c.json_path.empty()) {
        std::ofstream out(c.json_path);
        if (!out) throw ConfigError("cannot write " + c.json_path, 0);
        out << document;
    }
    return suite_exit_code(reports);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Discrete spectral geometry toolkit: heat semigroups, Kato constants, Schrodinger bottoms,\n"
                 "isoperimetric quantities and theorem checks.\n"
                 "Environment: SPECGEO_SEED and SPECGEO_MODES override the default seed (42) and mode count (300)."};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    Common common;
    auto* mesh_info = app.add_subcommand("mesh-info", "Counts, volume, diameter, Euler characteristic, b1, curvature summary");
    add_common(mesh_info, common);

    auto* spectrum = app.add_subcommand("spectrum", "Eigenvalue table (index, eigenvalue, residual)");
    add_common(spectrum, common);

    KatoArgs kato_args;
    std::string series_text;
    auto* kato = app.add_subcommand("kato", "Kato constant of a potential, its first threshold time, or a (T, kappa) series");
    add_common(kato, common);
    kato->add_option("--potential", kato_args.potential, "ricci-neg | shifted:LAMBDA | constant:C | file:PATH")
        ->capture_default_str();
    kato->add_option("--T", kato_args.horizon, "Time horizon")->check(CLI::PositiveNumber)->capture_default_str();
    kato->add_option("--threshold", kato_args.threshold, "Report the largest T with kappa_T <= target (cap 10 D^2)")
        ->check(CLI::PositiveNumber);
    kato->add_option("--series", series_text, "Comma-separated horizons; emits a two-column (T, kappa) table");

    ConstantsArgs constants_args;
    auto* constants = app.add_subcommand("constants", "Table of p, gamma, both diameter-constant forms and thresholds");
    constants->add_option("--n-min", constants_args.n_min, "Smallest dimension")->capture_default_str();
    constants->add_option("--n-max", constants_args.n_max, "Largest dimension")->capture_default_str();
    constants->add_option("--n", constants_args.n, "Single dimension (overrides the range)");
    constants->add_option("--delta-min", constants_args.delta_min, "Smallest delta")->capture_default_str();
    constants->add_option("--delta-max", constants_args.delta_max, "Largest delta")->capture_default_str();
    constants->add_option("--delta-steps", constants_args.delta_steps, "Grid points in delta")->capture_default_str();
    constants->add_option("--delta", constants_args.delta, "Single delta (overrides the range)");

    VerifyArgs verify_args;
    auto* verify = app.add_subcommand("verify", "Run theorem checks from a suite config, the default suite, or a single theorem");
    verify->add_option("config", verify_args.config_path, "Suite config file");
    verify->add_option("--suite", verify_args.suite, "Named suite ('default')");
    verify->add_option("--theorem", verify_args.theorem, "Single theorem id, run against --input");
    verify->add_option("--input", common.input, "Manifold for --theorem (same syntax as other subcommands)");
    auto* modes_opt = verify->add_option("--modes", common.modes, "Number of eigenpairs for mesh subjects")
                          ->envname("SPECGEO_MODES")
                          ->check(CLI::PositiveNumber)
                          ->capture_default_str();
    auto* seed_opt = verify->add_option("--seed", common.seed, "Suite seed")->envname("SPECGEO_SEED")->capture_default_str();
    verify->add_option("--json", common.json_path, "Write the JSON report document to this path ('-' for stdout)");
    std::map<std::string, std::string> theorem_flags;
    for (const auto& [flag, key, help] : std::vector<std::tuple<std::string, std::string, std::string>>{
             {"--epsilon", "epsilon", "epsilon for diameter"},
             {"--delta", "delta", "delta for sobolev"},
             {"--k", "k", "k for lichnerowicz and lichnerowicz_kato"},
             {"--lambda", "lambda", "lambda for lichnerowicz_kato"},
             {"--T", "T", "T for lichnerowicz_kato"},
             {"--R", "R", "R for geometric_kato (default D/2)"},
             {"--p", "p", "p for isoperimetric case 2"},
             {"--case", "case", "isoperimetric case (1 or 2)"},
             {"--trials", "trials", "number of random fields"}}) {
        verify->add_option(flag, theorem_flags[key], help);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input_error;
    }

    try {
        if (*mesh_info) return cmd_mesh_info(common);
        if (*spectrum) return cmd_spectrum(common);
        if (*kato) {
            if (!series_text.empty()) {
                std::istringstream in(series_text);
                std::string item;
                while (std::getline(in, item, ',')) {
                    const double t = std::stod(item);
                    if (!(t > 0.0)) throw DomainError("series horizons must be positive");
                    kato_args.series.push_back(t);
                }
            }
            return cmd_kato(common, kato_args);
        }
        if (*constants) return cmd_constants(constants_args);
        if (*verify) {
            for (const auto& [key, value] : theorem_flags) {
                if (!value.empty()) verify_args.params[key] = value;
            }
            verify_args.seed_given = seed_opt->count() > 0;
            verify_args.modes_given = modes_opt->count() > 0;
            return cmd_verify(common, verify_args);
        }
    } catch (const specgeo::Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input_error;
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: bad number in " << e.what() << '\n';
        return exit_input_error;
    }
    return exit_input_error;
}
