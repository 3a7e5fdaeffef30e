#include <cstdio>
#include <string>
#include <vector>

#include "doctest.h"
#include "metricdeform/json_io.hpp"

using namespace metricdeform;
using nlohmann::json;

namespace {

FiniteMetricMeasureSpace sample(Family f) {
    GeneratorSpec spec;
    spec.family = f;
    spec.depth = 4;
    spec.n = 8;
    return generate(spec);
}

}  // namespace

TEST_CASE("space round trips bit-exactly through json") {
    for (const Family f : {Family::Cantor, Family::GridSegment, Family::PuncturedGrid}) {
        const auto s = sample(f);
        const auto s2 = space_from_json(space_to_json(s));
        REQUIRE(s2.size() == s.size());
        CHECK(s2.base() == s.base());
        CHECK(s2.unbounded_truncation() == s.unbounded_truncation());
        for (std::size_t i = 0; i < s.size(); ++i) {
            CHECK(s2.id_of(i) == s.id_of(i));
            CHECK(s2.mass(i) == s.mass(i));
            for (std::size_t j = 0; j < s.size(); ++j)
                CHECK(s2.distance(i, j) == s.distance(i, j));
        }
    }
}

TEST_CASE("euclidean input expands to a matrix") {
    const json j{
        {"ids", {"a", "b"}},
        {"base", "a"},
        {"masses", {1.0, 2.0}},
        {"distance", {{"kind", "euclidean"}, {"coords", {{0.0, 0.0}, {3.0, 4.0}}}}},
    };
    const auto s = space_from_json(j);
    CHECK(s.distance(0, 1) == 5.0);
    CHECK(space_to_json(s)["distance"]["kind"] == "matrix");

    json bad = j;
    bad["distance"]["coords"] = {{0.0, 0.0}, {3.0}};
    CHECK_THROWS_AS(space_from_json(bad), JsonFormatError);
}

TEST_CASE("malformed space json is reported as a format error") {
    const auto good = space_to_json(sample(Family::GridSegment));

    json j = good;
    j.erase("ids");
    CHECK_THROWS_AS(space_from_json(j), JsonFormatError);

    j = good;
    j["base"] = "nope";
    CHECK_THROWS_AS(space_from_json(j), JsonFormatError);

    j = good;
    j["distance"]["rows"].erase(0);
    CHECK_THROWS_AS(space_from_json(j), JsonFormatError);

    j = good;
    j["distance"]["kind"] = "teleport";
    CHECK_THROWS_AS(space_from_json(j), JsonFormatError);

    j = good;
    j["masses"] = "oops";
    CHECK_THROWS_AS(space_from_json(j), JsonFormatError);
}

TEST_CASE("axiom violations surface as validation errors, not format errors") {
    json j = space_to_json(sample(Family::GridSegment));
    j["distance"]["rows"][0][1] = 99.0;  // breaks symmetry
    CHECK_THROWS_AS(space_from_json(j), SpaceValidationError);
}

TEST_CASE("generator specs round trip and reproduce the space") {
    GeneratorSpec spec;
    spec.family = Family::Cantor;
    spec.depth = 5;
    spec.ratio = 0.3;
    spec.mass_policy = MassPolicy::Uniform;
    const json j = generator_spec_to_json(spec);
    CHECK(j["family"] == "cantor");
    CHECK(j["mass_policy"] == "uniform");
    const GeneratorSpec back = generator_spec_from_json(j);
    const auto a = generate(spec);
    const auto b = generate(back);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t k = 0; k < a.size(); ++k) CHECK(a.distance(i, k) == b.distance(i, k));

    json bad = j;
    bad["family"] = "moebius";
    CHECK_THROWS_AS(generator_spec_from_json(bad), JsonFormatError);
    bad = j;
    bad["mass_policy"] = "heavy";
    CHECK_THROWS_AS(generator_spec_from_json(bad), JsonFormatError);
}

TEST_CASE("report serialization carries the fixed schema") {
    ComparabilityReport rep;
    rep.statement = "sandwich-lower";
    rep.absorb(0.5, "a", "b");
    rep.absorb(2.0, "c", "d");
    rep.cases["1a"] = 3;
    rep.excluded = 7;
    const json j = report_to_json(rep);
    CHECK(j["statement"] == "sandwich-lower");
    CHECK(j["min_ratio"] == 0.5);
    CHECK(j["max_ratio"] == 2.0);
    CHECK(j["witness_min"] == json::array({"a", "b"}));
    CHECK(j["witness_max"] == json::array({"c", "d"}));
    CHECK(j["cases"]["1a"] == 3);
    CHECK(j["excluded"] == 7);
    CHECK(j["degenerate"] == false);
    CHECK(j.find("extra") == j.end());

    rep.extra["slack"] = 1.0;
    CHECK(report_to_json(rep)["extra"]["slack"] == 1.0);
}

TEST_CASE("deformed spaces serialize with their transform block") {
    const auto inv = invert(sample(Family::GridSegment), 1.0);
    const json ji = deformed_to_json(inv);
    CHECK(ji["flags"]["unbounded_truncation"] == true);
    CHECK(ji["base"] == "7");
    CHECK(ji["transform"]["m0"] == 0);
    CHECK(ji["transform"]["density_kind"] == "canonical");
    CHECK(ji["transform"]["rho"].size() == 7);
    CHECK(ji["transform"]["infinity_estimates"].is_null());
    CHECK(ji["transform"]["ledger"]["c0"]["value"].is_number());
    // The same payload parses as a plain space matching as_space output.
    const auto parsed = space_from_json(ji);
    const auto direct = inv.as_space(natural_base(inv), true);
    for (std::size_t i = 0; i < parsed.size(); ++i)
        for (std::size_t j = 0; j < parsed.size(); ++j)
            CHECK(parsed.distance(i, j) == direct.distance(i, j));

    const auto sph = sphericalize(sample(Family::GridSegment), 1.0);
    const json js = deformed_to_json(sph);
    CHECK(js.find("flags") == js.end());
    CHECK(js["base"] == "0");
    CHECK(js["transform"]["m0"] == 1);
    CHECK(js["transform"]["kappa"].is_number());
    CHECK(js["transform"]["infinity_estimates"]["far_point"] == "7");
    CHECK(js["transform"]["infinity_estimates"]["intervals"].size() == 8);
}

TEST_CASE("analysis fragment maps infinities to null") {
    const auto grid = sample(Family::GridSegment);
    const auto doubling = doubling_constant(grid);
    const auto perf = uniform_perfectness(grid, 1);
    const auto fit = reverse_doubling_fit(grid, 1);
    const json with_fit = analysis_fragment(grid, doubling, perf, &fit);
    CHECK(with_fit["C_nu"].is_number());
    CHECK(with_fit["kappa"].is_number());
    CHECK(with_fit["alpha"].is_number());
    CHECK(with_fit["Lambda"].is_number());
    CHECK(with_fit["witnesses"]["doubling"]["point"].is_string());

    const json without_fit = analysis_fragment(grid, doubling, perf, nullptr);
    CHECK(without_fit["alpha"].is_null());
    CHECK(without_fit["Lambda"].is_null());
    CHECK(without_fit["witnesses"]["fit_range"].is_null());

    // A space whose points all sit inside radius 1 is not perfect for m0 = 1.
    const auto tight = build_space({"a", "b", "c"},
                                   {0.0, 0.25, 0.5, 0.25, 0.0, 0.25, 0.5, 0.25, 0.0},
                                   {1.0, 1.0, 1.0}, 0);
    const json inf_kappa =
        analysis_fragment(tight, doubling_constant(tight), uniform_perfectness(tight, 1),
                          nullptr);
    CHECK(inf_kappa["kappa"].is_null());
}

TEST_CASE("json files save and load") {
    const std::string path = "tmp_json_io_roundtrip.json";
    const json j = space_to_json(sample(Family::Cantor));
    save_json_file(path, j);
    CHECK(load_json_file(path) == j);
    std::remove(path.c_str());
    CHECK_THROWS_AS(load_json_file("definitely_missing.json"), JsonFormatError);
}
