#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "metricdeform/space.hpp"

namespace metricdeform {

class ParamOutOfRange : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

enum class Family {
    GridSegment,            // {0, s, ..., (n-1)s} on the line
    Cantor,                 // midpoints of the surviving intervals at a depth
    WeightedHalfLine,       // integer points with nu(B_r) ~ r^w
    GridPatch2D,            // side x side unit grid, flat metric
    ClusterCounterexample,  // base, a near point, and a far cluster
    PuncturedGrid,          // dyadic points accumulating at a zero-radius puncture
};

enum class MassPolicy { FamilyDefault, Uniform, Profile };

struct GeneratorSpec {
    Family family = Family::GridSegment;
    std::size_t n = 16;          // GridSegment, WeightedHalfLine, PuncturedGrid
    std::size_t depth = 4;       // Cantor, PuncturedGrid
    double ratio = 1.0 / 3.0;    // Cantor
    double spacing = 1.0;        // GridSegment
    double exponent = 1.0;       // WeightedHalfLine
    std::size_t side = 8;        // GridPatch2D
    double gap = 100.0;          // ClusterCounterexample
    MassPolicy mass_policy = MassPolicy::FamilyDefault;
};

// Deterministic sample spaces. Every output passes build_space validation,
// the base point is id "0" at the geometric origin, and truncations of
// unbounded model spaces carry the unbounded-truncation flag.
// Limits: depth <= 12, point count <= 4096.
FiniteMetricMeasureSpace generate(const GeneratorSpec& spec);

enum class FieldKind { Constant, Coordinate, CappedRadius, HalfIndicator, RandomLipschitz };

// cap < 0 selects R_inf / 4. RandomLipschitz draws a 1-Lipschitz field by
// greedy constraint satisfaction in a seeded shuffled order; all other kinds
// ignore the seed.
ScalarField test_field(const FiniteMetricMeasureSpace& space, FieldKind kind,
                       std::uint64_t seed = 0, double cap = -1.0);

// The four nonconstant kinds, named, in a fixed order.
std::vector<std::pair<std::string, ScalarField>> standard_test_fields(
    const FiniteMetricMeasureSpace& space, std::uint64_t seed = 0);

}  // namespace metricdeform
