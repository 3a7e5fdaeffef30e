#include "metricdeform/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

namespace metricdeform {
namespace {

constexpr std::size_t kMaxPoints = 4096;
constexpr std::size_t kMaxDepth = 12;

void require(bool ok, const std::string& field, const std::string& what) {
    if (!ok) throw ParamOutOfRange(field + ": " + what);
}

std::vector<std::string> sequential_ids(std::size_t n) {
    std::vector<std::string> ids(n);
    for (std::size_t i = 0; i < n; ++i) ids[i] = std::to_string(i);
    return ids;
}

std::vector<double> line_distances(const std::vector<double>& coords) {
    const std::size_t n = coords.size();
    std::vector<double> d(n * n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            d[i * n + j] = std::abs(coords[i] - coords[j]);
    return d;
}

FiniteMetricMeasureSpace from_line(const std::vector<double>& coords,
                                   std::vector<double> masses, bool truncated) {
    return build_space(sequential_ids(coords.size()), line_distances(coords),
                       std::move(masses), 0, truncated);
}

bool uniform_masses(const GeneratorSpec& spec) {
    return spec.mass_policy == MassPolicy::Uniform;
}

FiniteMetricMeasureSpace make_grid_segment(const GeneratorSpec& spec) {
    require(spec.n >= 2 && spec.n <= kMaxPoints, "n", "need 2 <= n <= 4096");
    require(std::isfinite(spec.spacing) && spec.spacing > 0.0, "spacing", "must be positive");
    std::vector<double> coords(spec.n);
    for (std::size_t k = 0; k < spec.n; ++k) coords[k] = static_cast<double>(k) * spec.spacing;
    return from_line(coords, std::vector<double>(spec.n, 1.0), true);
}

FiniteMetricMeasureSpace make_cantor(const GeneratorSpec& spec) {
    require(spec.depth >= 1 && spec.depth <= kMaxDepth, "depth", "need 1 <= depth <= 12");
    require(std::isfinite(spec.ratio) && spec.ratio > 0.0 && spec.ratio < 0.5,
            "ratio", "need 0 < ratio < 1/2");
    std::vector<double> lefts{0.0};
    double len = 1.0;
    for (std::size_t level = 0; level < spec.depth; ++level) {
        std::vector<double> next;
        next.reserve(lefts.size() * 2);
        const double child = len * spec.ratio;
        for (double a : lefts) {
            next.push_back(a);
            next.push_back(a + len - child);
        }
        lefts.swap(next);
        len = child;
    }
    // Midpoint of each surviving interval, shifted so the leftmost sits at 0.
    // The leftmost interval starts at 0, so the shift cancels the half-width.
    std::vector<double> coords(lefts.size());
    for (std::size_t i = 0; i < lefts.size(); ++i) coords[i] = lefts[i];
    const double mass = uniform_masses(spec) ? 1.0 : std::ldexp(1.0, -static_cast<int>(spec.depth));
    return from_line(coords, std::vector<double>(coords.size(), mass), false);
}

FiniteMetricMeasureSpace make_weighted_half_line(const GeneratorSpec& spec) {
    require(spec.n >= 2 && spec.n <= kMaxPoints, "n", "need 2 <= n <= 4096");
    require(std::isfinite(spec.exponent) && spec.exponent > 0.0, "exponent", "must be positive");
    std::vector<double> coords(spec.n);
    std::vector<double> masses(spec.n);
    for (std::size_t k = 0; k < spec.n; ++k) {
        const double t = static_cast<double>(k);
        coords[k] = t;
        masses[k] = uniform_masses(spec)
                        ? 1.0
                        : std::pow(t + 1.0, spec.exponent) - std::pow(t, spec.exponent);
    }
    return from_line(coords, std::move(masses), true);
}

FiniteMetricMeasureSpace make_grid_patch(const GeneratorSpec& spec) {
    require(spec.side >= 2 && spec.side * spec.side <= kMaxPoints,
            "side", "need 2 <= side and side^2 <= 4096");
    const std::size_t s = spec.side;
    const std::size_t n = s * s;
    std::vector<double> d(n * n, 0.0);
    for (std::size_t a = 0; a < n; ++a) {
        const double ax = static_cast<double>(a / s);
        const double ay = static_cast<double>(a % s);
        for (std::size_t b = 0; b < n; ++b) {
            const double bx = static_cast<double>(b / s);
            const double by = static_cast<double>(b % s);
            d[a * n + b] = std::hypot(ax - bx, ay - by);
        }
    }
    return build_space(sequential_ids(n), std::move(d), std::vector<double>(n, 1.0), 0, true);
}

FiniteMetricMeasureSpace make_cluster(const GeneratorSpec& spec) {
    require(std::isfinite(spec.gap) && spec.gap > 2.0, "gap", "must exceed 2");
    const std::vector<double> coords{0.0, 1.0, spec.gap, spec.gap + 1.0, spec.gap + 2.0};
    return from_line(coords, std::vector<double>(coords.size(), 1.0), false);
}

FiniteMetricMeasureSpace make_punctured_grid(const GeneratorSpec& spec) {
    require(spec.depth >= 1 && spec.depth <= kMaxDepth, "depth", "need 1 <= depth <= 12");
    require(spec.n >= 1 && spec.n + spec.depth + 1 <= kMaxPoints,
            "n", "need 1 <= n and n + depth + 1 <= 4096");
    std::vector<double> coords;
    std::vector<double> masses;
    coords.reserve(spec.n + spec.depth + 1);
    // Base at the puncture; its mass stands in for the discarded finer scales.
    coords.push_back(0.0);
    masses.push_back(std::ldexp(1.0, -static_cast<int>(spec.depth)));
    for (std::size_t k = spec.depth; k >= 1; --k) {
        coords.push_back(std::ldexp(1.0, -static_cast<int>(k)));
        masses.push_back(std::ldexp(1.0, -static_cast<int>(k)));
    }
    for (std::size_t j = 1; j <= spec.n; ++j) {
        coords.push_back(static_cast<double>(j));
        masses.push_back(1.0);
    }
    if (uniform_masses(spec)) masses.assign(coords.size(), 1.0);
    return from_line(coords, std::move(masses), true);
}

}  // namespace

FiniteMetricMeasureSpace generate(const GeneratorSpec& spec) {
    switch (spec.family) {
        case Family::GridSegment: return make_grid_segment(spec);
        case Family::Cantor: return make_cantor(spec);
        case Family::WeightedHalfLine: return make_weighted_half_line(spec);
        case Family::GridPatch2D: return make_grid_patch(spec);
        case Family::ClusterCounterexample: return make_cluster(spec);
        case Family::PuncturedGrid: return make_punctured_grid(spec);
    }
    throw ParamOutOfRange("family: unknown value");
}

namespace {

double unit_draw(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ScalarField random_lipschitz_field(const FiniteMetricMeasureSpace& space, std::uint64_t seed) {
    const std::size_t n = space.size();
    std::mt19937_64 rng(seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(order[i - 1], order[j]);
    }
    ScalarField u(n, 0.0);
    std::vector<bool> assigned(n, false);
    for (std::size_t step = 0; step < n; ++step) {
        const std::size_t i = order[step];
        if (step == 0) {
            u[i] = 0.0;
        } else {
            double lo = -std::numeric_limits<double>::infinity();
            double hi = std::numeric_limits<double>::infinity();
            for (std::size_t j = 0; j < n; ++j) {
                if (!assigned[j]) continue;
                lo = std::max(lo, u[j] - space.distance(i, j));
                hi = std::min(hi, u[j] + space.distance(i, j));
            }
            u[i] = lo + (hi - lo) * unit_draw(rng);
        }
        assigned[i] = true;
    }
    return u;
}

}  // namespace

ScalarField test_field(const FiniteMetricMeasureSpace& space, FieldKind kind,
                       std::uint64_t seed, double cap) {
    const std::size_t n = space.size();
    ScalarField u(n, 0.0);
    switch (kind) {
        case FieldKind::Constant:
            std::fill(u.begin(), u.end(), 1.0);
            break;
        case FieldKind::Coordinate:
            for (std::size_t i = 0; i < n; ++i) u[i] = space.radius_of(i);
            break;
        case FieldKind::CappedRadius: {
            const double c = cap >= 0.0 ? cap : space.max_radius() / 4.0;
            for (std::size_t i = 0; i < n; ++i) u[i] = std::min(space.radius_of(i), c);
            break;
        }
        case FieldKind::HalfIndicator: {
            std::size_t far = 0;
            for (std::size_t i = 1; i < n; ++i)
                if (space.radius_of(i) > space.radius_of(far)) far = i;
            const double half = space.max_radius() / 2.0;
            for (std::size_t i = 0; i < n; ++i)
                u[i] = space.distance(i, far) >= half ? 1.0 : 0.0;
            break;
        }
        case FieldKind::RandomLipschitz:
            u = random_lipschitz_field(space, seed);
            break;
    }
    return u;
}

std::vector<std::pair<std::string, ScalarField>> standard_test_fields(
    const FiniteMetricMeasureSpace& space, std::uint64_t seed) {
    std::vector<std::pair<std::string, ScalarField>> fields;
    fields.emplace_back("coordinate", test_field(space, FieldKind::Coordinate));
    fields.emplace_back("capped-radius", test_field(space, FieldKind::CappedRadius));
    fields.emplace_back("half-indicator", test_field(space, FieldKind::HalfIndicator));
    fields.emplace_back("random-lipschitz", test_field(space, FieldKind::RandomLipschitz, seed));
    return fields;
}

}  // namespace metricdeform
