#include "specgeo/constants.hpp"
#include "specgeo/errors.hpp"
#include "specgeo/geometry.hpp"
#include "specgeo/kato.hpp"
#include "specgeo/suite.hpp"

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

namespace py = pybind11;
using namespace specgeo;

namespace {

ScalarField field_for(const DiscreteManifold& mesh, const Eigen::VectorXd& values)
{
    if (values.size() != mesh.vertex_count()) throw DomainError("field has the wrong number of entries");
    return mesh.make_field(values);
}

py::dict isoperimetry_dict(const IsoperimetryResult& r)
{
    py::dict d;
    d["value"] = r.value;
    d["vertices"] = r.witness.vertices;
    d["boundary"] = r.witness.boundary;
    d["volume"] = r.witness.volume;
    d["exact"] = r.exactness == Exactness::exact;
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "Bindings for the specgeo C++ core";

    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
    py::register_exception<MeshError>(m, "MeshError", PyExc_ValueError);
    py::register_exception<ConvergenceError>(m, "ConvergenceError", PyExc_RuntimeError);

    py::class_<DiscreteManifold>(m, "Mesh")
        .def_property_readonly("vertex_count", &DiscreteManifold::vertex_count)
        .def_property_readonly("edge_count", &DiscreteManifold::edge_count)
        .def_property_readonly("face_count", &DiscreteManifold::face_count)
        .def_property_readonly("total_volume", &DiscreteManifold::total_volume)
        .def_property_readonly("euler_characteristic", &DiscreteManifold::euler_characteristic)
        .def_property_readonly("label", &DiscreteManifold::label)
        .def_property_readonly("vertex_volumes", &DiscreteManifold::vertex_volumes)
        .def("scaled", &DiscreteManifold::scaled, py::arg("s"));

    py::class_<SpectralDecomposition>(m, "Spectrum")
        .def_readonly("eigenvalues", &SpectralDecomposition::eigenvalues)
        .def_readonly("eigenfunctions", &SpectralDecomposition::eigenfunctions)
        .def_readonly("residuals", &SpectralDecomposition::residuals)
        .def_readonly("label", &SpectralDecomposition::label)
        .def_property_readonly("mode_count", &SpectralDecomposition::mode_count);

    m.def("icosphere", &make_icosphere, py::arg("subdivisions") = 4, py::arg("radius") = 1.0);
    m.def("flat_torus", &make_flat_torus_mesh, py::arg("lx"), py::arg("ly"), py::arg("nx"), py::arg("ny"));
    m.def("bumpy_sphere", &make_bumpy_sphere, py::arg("subdivisions") = 4, py::arg("amplitude") = 0.3,
          py::arg("frequency") = 4, py::arg("seed") = 7);
    m.def("load_mesh", [](const std::string& path) { return load_mesh(path); }, py::arg("path"));

    m.def("curvature_lowest", [](const DiscreteManifold& mesh) { return curvature_lowest(mesh).values; });
    m.def("diameter", [](const DiscreteManifold& mesh) { return diameter(mesh).value; });
    m.def("betti_one", &betti_one);

    m.def(
        "decompose",
        [](const DiscreteManifold& mesh, int modes, std::uint64_t seed) {
            return decompose(assemble(mesh), DecomposeOptions{.mode_count = std::min(modes, mesh.vertex_count()), .seed = seed});
        },
        py::arg("mesh"), py::arg("modes") = default_mode_cap, py::arg("seed") = default_seed);
    m.def(
        "sphere_model_spectrum",
        [](int n, double radius, int modes) { return decompose(make_sphere_model(n, radius, modes), modes); },
        py::arg("n"), py::arg("radius") = 1.0, py::arg("modes") = 10);
    m.def(
        "torus_model_spectrum",
        [](std::vector<double> periods, int modes) { return decompose(make_torus_model(periods, modes), modes); },
        py::arg("periods"), py::arg("modes") = 10);

    m.def(
        "kato_constant",
        [](const SpectralDecomposition& spec, const DiscreteManifold& mesh, const Eigen::VectorXd& v, double horizon) {
            ScalarField f = field_for(mesh, v);
            f.label = spec.label;
            return kato_constant(spec, f, horizon).value;
        },
        py::arg("spectrum"), py::arg("mesh"), py::arg("potential"), py::arg("T"));
    m.def(
        "resolvent_constant",
        [](const SpectralDecomposition& spec, const DiscreteManifold& mesh, const Eigen::VectorXd& v, double shift) {
            ScalarField f = field_for(mesh, v);
            f.label = spec.label;
            return resolvent_constant(spec, f, shift).value;
        },
        py::arg("spectrum"), py::arg("mesh"), py::arg("potential"), py::arg("L"));

    m.def("cheeger_exact", [](const DiscreteManifold& mesh) { return isoperimetry_dict(cheeger_exact(mesh)); });
    m.def(
        "cheeger_sweep",
        [](const DiscreteManifold& mesh, const SpectralDecomposition& spec, int fields) {
            return isoperimetry_dict(cheeger_sweep(mesh, spec, fields));
        },
        py::arg("mesh"), py::arg("spectrum"), py::arg("fields") = default_sweep_fields);

    m.def("sobolev_constants", [](int n, double delta) {
        const auto c = sobolev_constants(n, delta);
        return py::make_tuple(c.exponent, c.coefficient);
    });
    m.def("diameter_constant", [](int n, double delta) {
        const auto c = diameter_constant(n, delta);
        py::dict d;
        d["value"] = c.value;
        d["alternate"] = c.alternate;
        d["discrepancy"] = c.discrepancy;
        d["unbounded"] = c.unbounded;
        return d;
    });
    m.def(
        "hypothesis_threshold",
        [](const std::string& kind, int n, double epsilon, double lambda, double k, double horizon, double time,
           double kappa, double diam, double isoperimetric_bound, double p) {
            return hypothesis_threshold(parse_threshold_kind(kind),
                                        ThresholdParams{n, epsilon, lambda, k, horizon, time, kappa, diam,
                                                        isoperimetric_bound, p});
        },
        py::arg("kind"), py::arg("n"), py::arg("epsilon") = 0.0, py::arg("lambda_") = 0.0, py::arg("k") = 0.0,
        py::arg("T") = 0.0, py::arg("t") = 0.0, py::arg("kappa") = 0.0, py::arg("D") = 0.0,
        py::arg("I") = 0.0, py::arg("p") = 2.0);
    m.def("constants_table", &constants_table, py::arg("n_min"), py::arg("n_max"), py::arg("delta_min"),
          py::arg("delta_max"), py::arg("delta_steps"));

    m.def(
        "run_suite",
        [](const std::string& config_text) {
            const SuiteConfig config = config_text.empty() ? default_suite_config() : parse_suite_config(config_text);
            std::vector<TheoremReport> reports;
            {
                py::gil_scoped_release release;
                reports = run_suite(config);
            }
            return py::make_tuple(serialize_reports(reports, config), suite_exit_code(reports));
        },
        py::arg("config_text") = "",
        "Runs a suite (the default one when the text is empty); returns (json, exit_code).");
}
