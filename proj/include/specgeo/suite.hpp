#pragma once

#include "specgeo/verify.hpp"

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <vector>

namespace specgeo {

/// Generator name plus key=value parameters, e.g. icosphere subdivisions=4.
struct ManifoldSpec
{
    std::string name;
    std::string generator;
    std::map<std::string, std::string> params;
    int line = 0;
};

struct CheckSpec
{
    std::string theorem;
    std::string manifold;
    std::map<std::string, std::string> params;
    int line = 0;
};

struct SuiteConfig
{
    std::uint64_t seed = 42;
    int modes = 300;
    std::vector<ManifoldSpec> manifolds;
    std::vector<CheckSpec> checks;
};

/// Line-oriented format:
///
///     seed 42
///     modes 300
///     manifold ico icosphere subdivisions=4 radius=1
///     check lichnerowicz ico k=1
///
/// Blank lines and '#' comments are ignored.
SuiteConfig parse_suite_config(const std::string& text);
SuiteConfig load_suite_config(const std::filesystem::path& path);
SuiteConfig default_suite_config();
std::string default_suite_text();

const std::vector<std::string>& theorem_ids();

/// Parses "generator:key=value,key=value" (CLI form).
ManifoldSpec parse_manifold_argument(const std::string& argument);

/// Builds the subject for a manifold specification. Model specs with a
/// `path` parameter read a model config file.
Subject build_subject(const ManifoldSpec& spec, int modes, std::uint64_t seed);
DiscreteManifold build_mesh(const ManifoldSpec& spec);
bool is_model_spec(const ManifoldSpec& spec);
ModelManifold build_model(const ManifoldSpec& spec, int modes);

std::vector<TheoremReport> run_suite(const SuiteConfig& config);

/// 0 = no failures, 1 = at least one failure.
int suite_exit_code(const std::vector<TheoremReport>& reports);

/// One JSON document for the whole suite; byte-identical for identical input.
std::string serialize_reports(const std::vector<TheoremReport>& reports, const SuiteConfig& config);
/// Flat table: theorem, manifold, status, margin.
std::string report_table(const std::vector<TheoremReport>& reports);

} // namespace specgeo
