#pragma once

#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>

#include "metricdeform/space.hpp"

namespace metricdeform {

// Grid suprema that must hold strictly get padded by this factor so the
// reported constant certifies the strict inequality.
inline constexpr double kStrictPad = 1e-9;

// Radii window for estimators. Truncated inputs behave badly at their
// resolution floor and near the boundary; the default window clips both.
struct RadiusWindow {
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    bool contains(double r) const { return r >= lo && r <= hi; }
};

// [smallest positive pairwise distance, R_inf / 4].
RadiusWindow valid_annulus(const FiniteMetricMeasureSpace& space);

enum class RadiiPolicy {
    All,           // every center, every critical radius and midpoint
    ValidAnnulus,  // same grid clipped to the valid annulus
};

struct DoublingEstimate {
    double constant = 1.0;  // exact sup of nu(B(x,2r)) / nu(B(x,r)) over the grid
    std::size_t witness_point = 0;
    double witness_radius = 0.0;
    RadiiPolicy policy = RadiiPolicy::All;
    RadiusWindow window;  // meaningful for ValidAnnulus
};

struct PerfectnessEstimate {
    // Minimal factor such that B(b, kappa r) \ B(b, r) is nonempty for every
    // radius r in [floor, R_b]; +inf when no annulus at or above the floor can
    // ever be filled. Includes the strictness pad.
    double kappa = 1.0;
    bool finite = true;
    int m0 = 0;
    double floor = 0.0;           // lower end of the certified radius range
    double witness_radius = 0.0;  // radius attaining the binding ratio
    std::size_t annuli_checked = 0;
};

struct ReverseDoublingFit {
    double alpha = 1.0;
    double lambda = 1.0;  // nu(B_r)/nu(B_R) <= lambda (r/R)^alpha on the sampled pairs
    double range_lo = 0.0, range_hi = 0.0;
    double growth_factor = 1.0;  // smallest nu(B_{4 kappa t}) / nu(B_t) over the scan
    double kappa = 1.0;
    bool vacuous = false;  // no scales to scan (e.g. two-point spaces)
};

class DegenerateMeasure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class FitFailed : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class OutOfRange : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

// Exact supremum of the doubling ratio over all centers and the breakpoint
// grid of each center (critical radii, their halves, and midpoints). Ratios
// are only formed where the inner ball has positive mass.
DoublingEstimate doubling_constant(const FiniteMetricMeasureSpace& space,
                                   RadiiPolicy policy = RadiiPolicy::All);

// Uniform perfectness at the base for radii >= m0. The radius range starts at
// m0 for m0 = 1 and at the resolution floor for m0 = 0; kappa is the exact
// supremum of (next occupied shell) / r over that range.
PerfectnessEstimate uniform_perfectness(const FiniteMetricMeasureSpace& space, int m0);

// Certified lower volume bound nu(B_r)/nu(B_R) <= Lambda (r/R)^alpha for
// base-centered balls, r < R in [m0, 2 R_inf). alpha comes from the smallest
// growth factor across scales 4 kappa apart; Lambda is enlarged until the
// inequality holds on every sampled pair. Throws FitFailed when no positive
// alpha is certifiable.
ReverseDoublingFit reverse_doubling_fit(const FiniteMetricMeasureSpace& space, int m0);

// nu^{-1}(t) = sup { r >= 0 : nu(B_r) <= t } for 0 <= t < nu(Z). The
// supremum is always attained at a critical radius. Throws OutOfRange for
// t outside [0, nu(Z)).
double measure_inverse(const FiniteMetricMeasureSpace& space, double t);

}  // namespace metricdeform
