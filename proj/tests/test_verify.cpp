#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "doctest.h"
#include "metricdeform/generators.hpp"
#include "metricdeform/verify.hpp"

using namespace metricdeform;

namespace {

FiniteMetricMeasureSpace grid(std::size_t n) {
    GeneratorSpec spec;
    spec.family = Family::GridSegment;
    spec.n = n;
    return generate(spec);
}

FiniteMetricMeasureSpace cantor(std::size_t depth) {
    GeneratorSpec spec;
    spec.family = Family::Cantor;
    spec.depth = depth;
    return generate(spec);
}

std::map<std::string, ComparabilityReport> keyed(std::vector<ComparabilityReport> reports) {
    std::map<std::string, ComparabilityReport> out;
    for (auto& r : reports) out[r.statement] = std::move(r);
    return out;
}

bool id_in(const FiniteMetricMeasureSpace& s, const std::string& id) {
    for (std::size_t i = 0; i < s.size(); ++i)
        if (s.id_of(i) == id) return true;
    return false;
}

}  // namespace

TEST_CASE("proven pairwise bounds hold without violations") {
    for (const bool spherical : {true, false}) {
        const auto src = spherical ? grid(24) : cantor(4);
        const auto d = spherical ? sphericalize(src, 1.0) : flatten(src, 1.0);
        const auto reports = keyed(check_sandwich_and_bounds(src, d));
        REQUIRE(reports.size() == 10);
        for (const char* id : {"sandwich-lower", "sandwich-upper", "radial-lower-bound",
                               "chain-upper-bound", "ball-shape-inner", "ball-shape-outer",
                               "distance-to-infinity"}) {
            CAPTURE(id);
            REQUIRE(reports.count(id) == 1);
            const ComparabilityReport& r = reports.at(id);
            const auto it = r.extra.find("violations");
            if (it != r.extra.end()) CHECK(it->second == 0.0);
        }
        // One-sided bounds land on the right side of 1.
        CHECK(reports.at("sandwich-lower").min_ratio >= 1.0 - 1e-9);
        CHECK(reports.at("sandwich-upper").max_ratio <= 1.0 + 1e-9);
        CHECK(reports.at("radial-lower-bound").min_ratio >= 1.0 - 1e-9);
        if (!reports.at("chain-upper-bound").degenerate)
            CHECK(reports.at("chain-upper-bound").max_ratio <= 1.0 + 1e-9);

        // Witnesses cite real source ids.
        for (const auto& [id, r] : reports) {
            if (r.degenerate) continue;
            CAPTURE(id);
            if (!r.witness_min[0].empty()) CHECK(id_in(src, r.witness_min[0]));
            if (!r.witness_max[0].empty()) CHECK(id_in(src, r.witness_max[0]));
        }
    }
}

TEST_CASE("gauge statements are reported not applicable off the canonical path") {
    const auto src = cantor(3);
    const auto d = deform(src, MetricDensityProfile::tabulated({0.0}, {1.0}, 1.0), 1.0);
    const auto reports = keyed(check_sandwich_and_bounds(src, d));
    for (const char* id : {"separation-lower", "comparable-regime", "ball-shape-inner",
                           "ball-shape-outer", "near-implies-comparable"}) {
        CAPTURE(id);
        const ComparabilityReport& r = reports.at(id);
        CHECK(r.extra.count("not_applicable") == 1);
        CHECK(r.degenerate);
    }
    // The density-free inequalities still apply; with rho = 1 the chain
    // metric is exactly 2d, so the lower gauge sits at 2 and the upper at 1.
    CHECK(reports.at("sandwich-lower").min_ratio == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(reports.at("sandwich-upper").max_ratio == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("energy global ratio is a weighted mean of the pair ratios") {
    const auto src = cantor(4);
    const auto d = flatten(src, 1.0);
    const BesovParams params{2.0, 0.5};
    const auto fields = standard_test_fields(src, 5);
    const auto reports = keyed(check_energy_comparability(src, d, fields, params));
    REQUIRE(reports.count("energy-pair-ratio") == 1);
    REQUIRE(reports.count("energy-global") == 1);
    const ComparabilityReport& pair = reports.at("energy-pair-ratio");
    const ComparabilityReport& global = reports.at("energy-global");
    CHECK_FALSE(pair.degenerate);
    CHECK_FALSE(global.degenerate);
    CHECK(global.min_ratio >= pair.min_ratio * (1.0 - 1e-9));
    CHECK(global.max_ratio <= pair.max_ratio * (1.0 + 1e-9));

    // Case tallies cover every counted ordered pair.
    std::size_t tallied = 0;
    for (const auto& [name, count] : pair.cases) tallied += count;
    const std::size_t n = d.size();
    CHECK(tallied + pair.excluded == n * (n - 1));
}

TEST_CASE("sigma mismatch is refused unless explicitly allowed") {
    const auto src = cantor(3);
    const auto d = flatten(src, 2.0);
    const BesovParams params{2.0, 0.5};  // p theta = 1 != sigma
    const auto fields = standard_test_fields(src, 5);
    CHECK_THROWS_AS(check_energy_comparability(src, d, fields, params), SigmaMismatch);
    CHECK_NOTHROW(check_energy_comparability(src, d, fields, params, true));

    ScalarField short_field(3, 0.0);
    CHECK_THROWS_AS(
        check_energy_comparability(src, flatten(src, 1.0), {{"bad", short_field}}, params),
        DomainMismatch);
}

TEST_CASE("doubling preservation reports both constants") {
    const auto d = sphericalize(grid(32), 1.0);
    const ComparabilityReport r = check_doubling_preservation(d);
    CHECK(r.statement == "doubling-preservation");
    CHECK(r.min_ratio >= 1.0);
    CHECK(r.max_ratio >= r.min_ratio);
    CHECK(r.extra.count("C_nu_source") == 1);
    CHECK(r.extra.at("C_nu_source") > 1.0);
    CHECK(r.extra.count("witness_radius") == 1);
}

TEST_CASE("ball volume regimes emit six reports with the tail bounded") {
    const auto d = sphericalize(grid(64), 1.0);
    const auto reports = keyed(check_ball_volume_regimes(d));
    REQUIRE(reports.size() == 6);
    for (const char* id : {"ball-volume-small", "ball-volume-middle", "ball-volume-large",
                           "ball-volume-total", "tail-mass", "measure-inverse-doubling"}) {
        CAPTURE(id);
        REQUIRE(reports.count(id) == 1);
        const ComparabilityReport& r = reports.at(id);
        CHECK(r.min_ratio <= r.max_ratio);
        CHECK(std::isfinite(r.max_ratio));
        CHECK(r.min_ratio > 0.0);
    }
    // Doubling of the inverse never shrinks a radius.
    CHECK(reports.at("measure-inverse-doubling").min_ratio >= 1.0);

    // Without a canonical gauge every regime is vacuous by construction.
    const auto plain = deform(cantor(3), MetricDensityProfile::tabulated({0.0}, {1.0}, 1.0),
                              1.0);
    for (const auto& r : check_ball_volume_regimes(plain)) {
        CHECK(r.extra.count("not_applicable") == 1);
        CHECK(r.degenerate);
    }
}

TEST_CASE("perfectness preservation certifies both target kinds") {
    const ComparabilityReport bounded = check_perfectness_preservation(sphericalize(grid(32), 1.0));
    CHECK(bounded.statement == "perfectness-preservation");
    if (!bounded.extra.count("infinite")) {
        CHECK(bounded.max_ratio >= 1.0);
        CHECK(std::isfinite(bounded.max_ratio));
    }

    const ComparabilityReport unbounded = check_perfectness_preservation(flatten(cantor(4), 1.0));
    CHECK(unbounded.statement == "perfectness-preservation");
    CHECK((unbounded.extra.count("infinite") == 1 || unbounded.max_ratio >= 1.0));
}

TEST_CASE("duality composes the transforms and tracks three ratios") {
    const auto reports =
        keyed(duality_report(grid(32), 1.0, DualityDirection::SphereThenFlatten));
    REQUIRE(reports.size() == 3);
    for (const char* id : {"duality-metric", "duality-measure", "duality-density-product"}) {
        CAPTURE(id);
        REQUIRE(reports.count(id) == 1);
        const ComparabilityReport& r = reports.at(id);
        CHECK(r.min_ratio > 0.0);
        CHECK(std::isfinite(r.max_ratio));
    }

    const auto back = keyed(duality_report(cantor(4), 1.0, DualityDirection::FlattenThenSphere));
    REQUIRE(back.size() == 3);
    CHECK_FALSE(back.at("duality-metric").degenerate);
}

TEST_CASE("verification output is identical across thread counts") {
    const auto src = grid(48);
    const auto d1 = sphericalize(src, 1.0, TransformOptions{64.0, false, 1});
    const auto d8 = sphericalize(src, 1.0, TransformOptions{64.0, false, 8});
    const auto a = check_sandwich_and_bounds(src, d1);
    const auto b = check_sandwich_and_bounds(src, d8);
    REQUIRE(a.size() == b.size());
    for (std::size_t k = 0; k < a.size(); ++k) {
        CHECK(a[k].statement == b[k].statement);
        CHECK(a[k].min_ratio == b[k].min_ratio);
        CHECK(a[k].max_ratio == b[k].max_ratio);
        CHECK(a[k].witness_min == b[k].witness_min);
        CHECK(a[k].witness_max == b[k].witness_max);
    }
}
