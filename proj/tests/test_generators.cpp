#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "metricdeform/generators.hpp"

using namespace metricdeform;

namespace {

GeneratorSpec family_spec(Family f) {
    GeneratorSpec spec;
    spec.family = f;
    return spec;
}

}  // namespace

TEST_CASE("grid segment lays out an even truncation") {
    GeneratorSpec spec = family_spec(Family::GridSegment);
    spec.n = 4;
    const auto s = generate(spec);
    CHECK(s.size() == 4);
    CHECK(s.unbounded_truncation());
    CHECK(s.base() == 0);
    CHECK(s.id_of(3) == "3");
    CHECK(s.distance(0, 3) == 3.0);
    CHECK(s.distance(1, 2) == 1.0);
    CHECK(s.total_mass() == 4.0);

    spec.spacing = 0.5;
    CHECK(generate(spec).distance(0, 3) == 1.5);
}

TEST_CASE("cantor levels sit at the surviving interval offsets") {
    GeneratorSpec spec = family_spec(Family::Cantor);
    spec.depth = 1;
    const auto d1 = generate(spec);
    CHECK(d1.size() == 2);
    CHECK_FALSE(d1.unbounded_truncation());
    CHECK(d1.distance(0, 1) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(d1.mass(0) == 0.5);
    CHECK(d1.mass(1) == 0.5);

    spec.depth = 2;
    const auto d2 = generate(spec);
    CHECK(d2.size() == 4);
    const double expect[4] = {0.0, 2.0 / 9.0, 2.0 / 3.0, 8.0 / 9.0};
    for (std::size_t i = 0; i < 4; ++i) {
        CHECK(d2.radius_of(i) == doctest::Approx(expect[i]).epsilon(1e-15));
        CHECK(d2.mass(i) == 0.25);
    }
    CHECK(d2.total_mass() == doctest::Approx(1.0).epsilon(1e-15));

    spec.mass_policy = MassPolicy::Uniform;
    CHECK(generate(spec).mass(2) == 1.0);

    spec.mass_policy = MassPolicy::FamilyDefault;
    spec.depth = 1;
    spec.ratio = 0.25;
    CHECK(generate(spec).distance(0, 1) == doctest::Approx(0.75).epsilon(1e-15));
}

TEST_CASE("weighted half-line realizes the power-law ball profile") {
    GeneratorSpec spec = family_spec(Family::WeightedHalfLine);
    spec.n = 6;
    spec.exponent = 2.0;
    const auto s = generate(spec);
    CHECK(s.unbounded_truncation());
    for (std::size_t k = 0; k < 6; ++k) {
        const double t = static_cast<double>(k);
        CHECK(s.mass(k) == doctest::Approx(2.0 * t + 1.0).epsilon(1e-15));
        CHECK(s.ball_mass(0, t + 0.5) == doctest::Approx((t + 1.0) * (t + 1.0)).epsilon(1e-15));
    }
}

TEST_CASE("2d patch uses the euclidean metric on a square") {
    GeneratorSpec spec = family_spec(Family::GridPatch2D);
    spec.side = 3;
    const auto s = generate(spec);
    CHECK(s.size() == 9);
    CHECK(s.unbounded_truncation());
    CHECK(s.radius_of(0) == 0.0);
    // Index a maps to (a / side, a % side).
    CHECK(s.distance(0, 8) == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.distance(1, 3) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));
    CHECK(s.distance(3, 6) == 1.0);
    CHECK(s.max_radius() == doctest::Approx(2.0 * std::sqrt(2.0)).epsilon(1e-15));
}

TEST_CASE("punctured grid stacks dyadic scales onto a coarse tail") {
    GeneratorSpec spec = family_spec(Family::PuncturedGrid);
    spec.depth = 3;
    spec.n = 2;
    const auto s = generate(spec);
    CHECK(s.size() == 6);
    CHECK(s.unbounded_truncation());
    const double coords[6] = {0.0, 0.125, 0.25, 0.5, 1.0, 2.0};
    const double masses[6] = {0.125, 0.125, 0.25, 0.5, 1.0, 1.0};
    for (std::size_t i = 0; i < 6; ++i) {
        CHECK(s.radius_of(i) == coords[i]);
        CHECK(s.mass(i) == masses[i]);
    }
    CHECK(s.min_positive_distance() == 0.125);
}

TEST_CASE("cluster counterexample separates two groups by the gap") {
    GeneratorSpec spec = family_spec(Family::ClusterCounterexample);
    spec.gap = 10.0;
    const auto s = generate(spec);
    CHECK(s.size() == 5);
    CHECK_FALSE(s.unbounded_truncation());
    CHECK(s.distance(1, 2) == 9.0);
    CHECK(s.max_radius() == 12.0);
}

TEST_CASE("parameter validation rejects out-of-range specs") {
    GeneratorSpec spec;
    spec.family = Family::GridSegment;
    spec.n = 1;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
    spec.n = 4097;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
    spec.n = 4;
    spec.spacing = 0.0;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);

    spec = family_spec(Family::Cantor);
    spec.depth = 0;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
    spec.depth = 13;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
    spec.depth = 3;
    spec.ratio = 0.5;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);

    spec = family_spec(Family::WeightedHalfLine);
    spec.exponent = 0.0;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);

    spec = family_spec(Family::GridPatch2D);
    spec.side = 1;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
    spec.side = 65;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);

    spec = family_spec(Family::ClusterCounterexample);
    spec.gap = 2.0;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);

    spec = family_spec(Family::PuncturedGrid);
    spec.depth = 0;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
    spec.depth = 4;
    spec.n = 4095;
    CHECK_THROWS_AS(generate(spec), ParamOutOfRange);
}

TEST_CASE("generation is deterministic") {
    GeneratorSpec spec = family_spec(Family::Cantor);
    spec.depth = 5;
    const auto a = generate(spec);
    const auto b = generate(spec);
    REQUIRE(a.size() == b.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
        CHECK(a.mass(i) == b.mass(i));
        for (std::size_t j = 0; j < a.size(); ++j) CHECK(a.distance(i, j) == b.distance(i, j));
    }
}

TEST_CASE("test fields cover the advertised shapes") {
    GeneratorSpec spec = family_spec(Family::GridSegment);
    spec.n = 32;
    const auto s = generate(spec);

    const auto ones = test_field(s, FieldKind::Constant);
    const auto coord = test_field(s, FieldKind::Coordinate);
    const auto capped = test_field(s, FieldKind::CappedRadius);
    const auto custom = test_field(s, FieldKind::CappedRadius, 0, 2.0);
    const auto half = test_field(s, FieldKind::HalfIndicator);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(ones[i] == 1.0);
        CHECK(coord[i] == s.radius_of(i));
        CHECK(capped[i] == std::min(s.radius_of(i), s.max_radius() / 4.0));
        CHECK(custom[i] == std::min(s.radius_of(i), 2.0));
        CHECK((half[i] == 0.0 || half[i] == 1.0));
    }
    CHECK(half[s.base()] == 1.0);   // the base sits far from the far point
    CHECK(half[s.size() - 1] == 0.0);

    const auto lip1 = test_field(s, FieldKind::RandomLipschitz, 7);
    const auto lip1b = test_field(s, FieldKind::RandomLipschitz, 7);
    const auto lip2 = test_field(s, FieldKind::RandomLipschitz, 8);
    bool differs = false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(lip1[i] == lip1b[i]);
        differs = differs || lip1[i] != lip2[i];
        for (std::size_t j = 0; j < s.size(); ++j)
            CHECK(std::abs(lip1[i] - lip1[j]) <= s.distance(i, j) * (1.0 + 1e-12));
    }
    CHECK(differs);

    const auto fields = standard_test_fields(s, 7);
    REQUIRE(fields.size() == 4);
    CHECK(fields[0].first == "coordinate");
    CHECK(fields[1].first == "capped-radius");
    CHECK(fields[2].first == "half-indicator");
    CHECK(fields[3].first == "random-lipschitz");
    CHECK(fields[3].second == lip1);
}
