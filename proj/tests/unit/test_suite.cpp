#include "specgeo/errors.hpp"
#include "specgeo/suite.hpp"

#include <doctest.h>
#include <json.hpp>

#include <numbers>
#include <set>

using namespace specgeo;

namespace {

const char* small_config = R"(# small suite
seed 7
modes 40
manifold ico icosphere subdivisions=2
manifold torus flat_torus lx=2pi ly=2pi nx=8 ny=8
manifold s3 model kind=sphere dim=3 radius=1 modes=40
check lichnerowicz s3 k=1
check betti torus
check diameter s3 epsilon=0.1
check buser ico
)";

} // namespace

TEST_CASE("config parsing")
{
    const auto c = parse_suite_config(small_config);
    CHECK(c.seed == 7);
    CHECK(c.modes == 40);
    REQUIRE(c.manifolds.size() == 3);
    CHECK(c.manifolds[1].generator == "flat_torus");
    CHECK(c.manifolds[1].params.at("lx") == "2pi");
    CHECK(c.manifolds[1].line == 5);
    REQUIRE(c.checks.size() == 4);
    CHECK(c.checks[2].params.at("epsilon") == "0.1");
}

TEST_CASE("config errors carry line numbers")
{
    auto line_of = [](const std::string& text) {
        try {
            parse_suite_config(text);
        } catch (const ConfigError& e) {
            return e.line();
        }
        return -1;
    };
    CHECK(line_of("manifold a icosphere\ncheck nope a\n") == 2);
    CHECK(line_of("manifold a icosphere\n\ncheck betti b\n") == 3);
    CHECK(line_of("manifold a sphere_thing\n") == 1);
    CHECK(line_of("seed\n") == 1);
    CHECK(line_of("manifold a icosphere\ncheck diameter a delta=3\n") == 2);
    CHECK(line_of("bogus line\n") == 1);
}

TEST_CASE("bad generator values are reported against the manifold line")
{
    const auto config = parse_suite_config("seed 1\nmanifold a icosphere radius=abc\ncheck betti a\n");
    try {
        run_suite(config);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("empty selection yields an empty report list")
{
    const auto reports = run_suite(parse_suite_config("manifold a icosphere subdivisions=1\n"));
    CHECK(reports.empty());
    CHECK(suite_exit_code(reports) == 0);
}

TEST_CASE("small suite runs in config order and serializes deterministically")
{
    const auto config = parse_suite_config(small_config);
    const auto a = run_suite(config);
    const auto b = run_suite(config);
    REQUIRE(a.size() == 4);
    CHECK(a[0].theorem == "lichnerowicz");
    CHECK(a[1].theorem == "betti");
    CHECK(a[3].theorem == "buser");
    CHECK(suite_exit_code(a) == 0);
    const std::string ja = serialize_reports(a, config);
    CHECK(ja == serialize_reports(b, config));

    const auto doc = nlohmann::json::parse(ja);
    CHECK(doc["seed"] == 7);
    CHECK(doc["reports"].size() == 4);
    CHECK(doc["reports"][0]["status"] == "pass");
    CHECK(doc["reports"][3]["status"] == "report-only");
    CHECK(doc["exit_code"] == 0);

    const std::string table = report_table(a);
    CHECK(table.rfind("theorem\tmanifold\tstatus\tmargin\n", 0) == 0);
}

TEST_CASE("mesh-only theorem on a model is a config error at run time")
{
    const auto config = parse_suite_config("manifold s3 model kind=sphere dim=3\ncheck betti s3\n");
    try {
        run_suite(config);
        FAIL("expected a config error");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("failures set exit code 1")
{
    TheoremReport ok, bad;
    ok.status = Status::pass;
    bad.status = Status::fail;
    CHECK(suite_exit_code({ok}) == 0);
    CHECK(suite_exit_code({ok, bad}) == 1);
}

TEST_CASE("CLI manifold arguments")
{
    const auto a = parse_manifold_argument("icosphere:subdivisions=3,radius=2");
    CHECK(a.generator == "icosphere");
    CHECK(a.params.at("subdivisions") == "3");
    const auto f = parse_manifold_argument("file:/tmp/x.off");
    CHECK(f.generator == "file");
    CHECK(f.params.at("path") == "/tmp/x.off");
    const auto m = parse_manifold_argument("model:kind=torus,dim=2,periods=2pi,3");
    CHECK(is_model_spec(m));
    const auto model = build_model(m, 10);
    CHECK(model.periods.size() == 2);
    CHECK(model.periods[0] == doctest::Approx(2.0 * std::numbers::pi));
    CHECK(model.periods[1] == 3.0);
}

TEST_CASE("default suite text parses and names every theorem")
{
    const auto c = default_suite_config();
    CHECK(c.seed == 42);
    CHECK(c.manifolds.size() == 5);
    std::set<std::string> seen;
    for (const auto& check : c.checks) seen.insert(check.theorem);
    CHECK(seen.size() == theorem_ids().size());
}
