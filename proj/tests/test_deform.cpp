#include <cmath>
#include <cstddef>
#include <vector>

#include "doctest.h"
#include "metricdeform/deform.hpp"
#include "metricdeform/generators.hpp"

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

FiniteMetricMeasureSpace cluster(double gap) {
    GeneratorSpec spec;
    spec.family = Family::ClusterCounterexample;
    spec.gap = gap;
    return generate(spec);
}

// On a uniformly spaced line with a density that is convex and decreasing in
// the coordinate, refining any chain edge never increases its cost, so the
// all-intermediate chain is optimal. That gives a closed form to test the
// shortest-path computation against.
double consecutive_chain(const std::vector<double>& rho, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    double acc = 0.0;
    for (std::size_t k = i; k < j; ++k) acc += rho[k] + rho[k + 1];
    return acc;
}

}  // namespace

TEST_CASE("sphericalized grid matches the consecutive-chain closed form") {
    const auto d = sphericalize(grid(8), 1.0);
    CHECK(d.size() == 8);
    CHECK(d.m0.has_value());
    CHECK(*d.m0 == 1);
    CHECK(d.sigma == 1.0);
    CHECK(d.kappa_finite);
    CHECK(d.kappa == doctest::Approx(2.0).epsilon(1e-8));
    CHECK_FALSE(d.perfectness_warning);

    // rho(k) = 1 / ((k+1) nu(B_{k+1})) = (k+1)^{-2} with unit masses.
    std::vector<double> rho(8);
    for (std::size_t k = 0; k < 8; ++k) {
        rho[k] = 1.0 / ((k + 1.0) * (k + 1.0));
        CHECK(d.rho[k] == doctest::Approx(rho[k]).epsilon(1e-15));
        CHECK(d.retained[k] == k);
        CHECK(d.nuhat[k] == doctest::Approx(rho[k]).epsilon(1e-15));
    }

    CHECK(d.dhat_at(0, 1) == 1.25);
    CHECK(d.dhat_at(0, 2) == doctest::Approx(29.0 / 18.0).epsilon(1e-15));
    for (std::size_t i = 0; i < 8; ++i) {
        CHECK(d.dhat_at(i, i) == 0.0);
        for (std::size_t j = 0; j < 8; ++j) {
            CHECK(d.dhat_at(i, j) == d.dhat_at(j, i));
            if (i != j)
                CHECK(d.dhat_at(i, j) ==
                      doctest::Approx(consecutive_chain(rho, i, j)).epsilon(1e-13));
            for (std::size_t k = 0; k < 8; ++k)
                CHECK(d.dhat_at(i, j) <=
                      (d.dhat_at(i, k) + d.dhat_at(k, j)) * (1.0 + 1e-14));
        }
    }

    double total = 0.0;
    for (const double w : d.nuhat) total += w;
    CHECK(d.nuhat_total() == doctest::Approx(total).epsilon(1e-15));
}

TEST_CASE("a constant density scales the metric linearly and the measure by c^sigma") {
    const auto s = cantor(3);
    const auto unit = MetricDensityProfile::tabulated({0.0}, {1.0}, 1.0);
    const auto one = deform(s, unit, 2.0);
    CHECK(one.size() == s.size());  // finite at zero: base stays
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < s.size(); ++j)
            CHECK(one.dhat_at(i, j) == 2.0 * s.distance(i, j));

    const auto thrice = deform(s, MetricDensityProfile::tabulated({0.0}, {3.0}, 3.0), 2.0);
    for (std::size_t i = 0; i < s.size(); ++i) {
        CHECK(thrice.nuhat[i] == doctest::Approx(9.0 * s.mass(i)).epsilon(1e-15));
        for (std::size_t j = 0; j < s.size(); ++j)
            CHECK(thrice.dhat_at(i, j) == doctest::Approx(6.0 * s.distance(i, j)).epsilon(1e-15));
    }

    CHECK_THROWS_AS(deform(s, unit, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(deform(s, unit, -1.0), std::invalid_argument);
}

TEST_CASE("inversion drops the base and uses the punctured gauge") {
    const auto d = invert(grid(8), 1.0);
    CHECK(d.size() == 7);
    CHECK(*d.m0 == 0);
    CHECK_FALSE(d.infinity.has_value());

    std::vector<double> rho(7);
    for (std::size_t k = 0; k < 7; ++k) {
        CHECK(d.retained[k] == k + 1);
        CHECK(d.source_radius(k) == static_cast<double>(k + 1));
        rho[k] = 1.0 / ((k + 1.0) * (k + 1.0));  // 1/(j nu(B_j)) = j^{-2} at j = k+1
        CHECK(d.rho[k] == doctest::Approx(rho[k]).epsilon(1e-15));
    }
    for (std::size_t i = 0; i < 7; ++i)
        for (std::size_t j = i + 1; j < 7; ++j)
            CHECK(d.dhat_at(i, j) ==
                  doctest::Approx(consecutive_chain(rho, i, j)).epsilon(1e-13));

    CHECK(natural_base(d) == 6);  // farthest retained point
}

TEST_CASE("sphericalization keeps the base and brackets distance to infinity") {
    const auto d = sphericalize(grid(16), 1.0);
    CHECK(natural_base(d) == 0);
    CHECK(d.retained[0] == d.source.base());
    REQUIRE(d.infinity.has_value());
    const InfinityEstimates& inf = *d.infinity;
    REQUIRE(inf.intervals.size() == d.size());
    CHECK(d.source_radius(inf.far_point) == d.source.max_radius());
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(inf.intervals[i].lo >= 0.0);
        CHECK(inf.intervals[i].lo <= inf.intervals[i].hi);
        CHECK(inf.intervals[i].lo ==
              doctest::Approx(d.density.integral(d.source_radius(i), d.source.max_radius()))
                  .epsilon(1e-14));
    }
    // The radial integral shrinks as the point moves out.
    for (std::size_t i = 0; i + 1 < d.size(); ++i)
        CHECK(inf.intervals[i].lo >= inf.intervals[i + 1].lo);
}

TEST_CASE("transform gates enforce flags and perfectness") {
    CHECK_THROWS_AS(flatten(grid(8), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(sphericalize(cantor(3), 1.0), std::invalid_argument);
    CHECK_THROWS_AS(invert(cantor(3), 1.0), std::invalid_argument);

    CHECK_THROWS_AS(flatten(cluster(100.0), 1.0), NotPerfectAtBase);
    TransformOptions wide;
    wide.kappa_max = 256.0;
    const auto ok = flatten(cluster(100.0), 1.0, wide);
    CHECK(ok.kappa >= 99.0);
    CHECK_FALSE(ok.perfectness_warning);

    // A truncation with a matching gap: sphericalization only warns by
    // default and refuses when the gate is hard.
    const std::vector<double> coords{0.0, 1.0, 100.0, 101.0, 102.0};
    std::vector<std::string> ids;
    std::vector<double> dist;
    for (std::size_t i = 0; i < coords.size(); ++i) {
        ids.push_back(std::to_string(i));
        for (std::size_t j = 0; j < coords.size(); ++j)
            dist.push_back(std::abs(coords[i] - coords[j]));
    }
    const auto gapped =
        build_space(ids, dist, std::vector<double>(coords.size(), 1.0), 0, true);
    const auto soft = sphericalize(gapped, 1.0);
    CHECK(soft.perfectness_warning);
    TransformOptions hard;
    hard.hard_perfectness_gate = true;
    CHECK_THROWS_AS(sphericalize(gapped, 1.0, hard), NotPerfectAtLargeScales);
}

TEST_CASE("chain metric is bit-identical across thread counts") {
    const auto s = grid(64);
    std::vector<double> rho(s.size());
    for (std::size_t i = 0; i < s.size(); ++i) rho[i] = 1.0 / (1.0 + s.radius_of(i));
    const auto one = chain_metric(s.distance_matrix(), s.size(), rho, 1);
    const auto many = chain_metric(s.distance_matrix(), s.size(), rho, 8);
    REQUIRE(one.size() == many.size());
    for (std::size_t k = 0; k < one.size(); ++k) CHECK(one[k] == many[k]);

    TransformOptions t1, t8;
    t1.threads = 1;
    t8.threads = 8;
    const auto d1 = sphericalize(s, 1.0, t1);
    const auto d8 = sphericalize(s, 1.0, t8);
    for (std::size_t k = 0; k < d1.dhat.size(); ++k) CHECK(d1.dhat[k] == d8.dhat[k]);
}

TEST_CASE("certified constants really bound the small-ball shape") {
    const auto d = sphericalize(grid(32), 1.0);
    const ConstantsLedger led = certify_constants(d);
    CHECK(led.c0.value > 0.0);
    CHECK(led.a1.value > 0.0);
    CHECK(led.a1.value <= led.a2.value);
    CHECK(led.small_ball_rho_lo <= 1.0 + 1e-12);
    CHECK(led.small_ball_rho_hi >= 1.0 - 1e-12);
    if (led.has_comparable_pairs) CHECK(led.c1_comp.value <= led.C1_comp.value);
    if (led.has_separated_pairs) CHECK(led.c2.value <= led.C2.value);
    CHECK(led.c_prime >= led.c0.value);

    for (std::size_t i = 0; i < d.size(); ++i) {
        const double ri = d.source_radius(i);
        if (ri > led.window.hi) continue;
        const double m = ri + 1.0;
        double ball = 0.0;
        for (std::size_t q = 0; q < d.source.size(); ++q)
            if (d.source.distance(d.retained[i], q) < m) ball += d.source.mass(q);
        const double scale = std::pow(ball, -1.0 / d.sigma);
        for (const double f : {0.5, 1.0}) {
            const double r = f * led.c0.value * scale;
            for (std::size_t j = 0; j < d.size(); ++j) {
                if (j == i) continue;
                const double ds = d.source.distance(d.retained[i], d.retained[j]);
                const double dh = d.dhat_at(i, j);
                if (d.rho[i] * ds < led.a1.value * r * (1.0 - 1e-12)) CHECK(dh < r);
                if (dh < r * (1.0 - 1e-12))
                    CHECK(d.rho[i] * ds < led.a2.value * r * (1.0 + 1e-12));
            }
        }
    }
}

TEST_CASE("radial tabulation is exact at every point radius") {
    const auto s = grid(32);
    const auto fn = [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); };
    const auto rho = tabulate_radial(s, fn, 1.0);
    for (std::size_t i = 0; i < s.size(); ++i)
        CHECK(rho.value(s.radius_of(i)) == fn(s.radius_of(i)));
}

TEST_CASE("product-weight demo reports a consistent shortcut chain") {
    const auto s = grid(32);
    const auto rho = tabulate_radial(
        s, [](double t) { return 1.0 / ((1.0 + t) * (1.0 + t)); }, 1.0);
    const ProductDemoReport rep = product_deform_demo(s, rho, 1, 2);
    CHECK(rep.d_tilde <= rep.direct_cost * (1.0 + 1e-12));
    CHECK(rep.d_tilde <= rep.best_two_hop * (1.0 + 1e-12));
    CHECK(rep.best_two_hop <= rep.via_far_cost * (1.0 + 1e-12));
    CHECK(rep.via_far_cost <= rep.far_bound * (1.0 + 1e-12));
    CHECK(s.radius_of(rep.far_point) == s.max_radius());

    CHECK_THROWS_AS(product_deform_demo(s, rho, 1, 1), std::invalid_argument);
}

TEST_CASE("deformed data repackages as a valid space") {
    const auto d = invert(grid(8), 1.0);
    const std::size_t nb = natural_base(d);
    const auto sp = d.as_space(nb, true);
    CHECK(sp.size() == d.size());
    CHECK(sp.unbounded_truncation());
    CHECK(sp.base() == nb);
    CHECK(sp.total_mass() == doctest::Approx(d.nuhat_total()).epsilon(1e-14));
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(sp.id_of(i) == d.id_of(i));
        CHECK(sp.mass(i) == d.nuhat[i]);
        for (std::size_t j = 0; j < d.size(); ++j)
            CHECK(sp.distance(i, j) == d.dhat_at(i, j));
    }
}
