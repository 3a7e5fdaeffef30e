#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "metricdeform/analysis.hpp"
#include "metricdeform/density.hpp"
#include "metricdeform/space.hpp"

namespace metricdeform {

class NotPerfectAtLargeScales : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class NotPerfectAtBase : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PointInterval {
    double lo = 0.0;
    double hi = 0.0;
};

// Distance-to-the-ideal-point estimates for bounded-target transforms.
// lo is the exact radial integral from |x| to the truncation radius; hi routes
// through the farthest point plus the spread of the far annulus.
struct InfinityEstimates {
    std::vector<PointInterval> intervals;  // indexed like the retained points
    std::size_t far_point = 0;             // retained-local index
    double spread = 0.0;
    // No second point at radius >= |x_far| / kappa: degenerate truncation; the
    // spread falls back to the two farthest points.
    bool empty_far_annulus = false;
};

struct CertifiedValue {
    double value = 0.0;
    std::string witness;
    std::size_t samples = 0;
};

// Empirically certified comparison constants of a canonical deformation,
// each tight over its recorded sample set within the valid annulus.
struct ConstantsLedger {
    // Small-ball shape: for 0 < r <= c0 nu(B_m(x))^{-1/sigma},
    // B(x, a1 r / rho(x)) is inside Bhat(x, r) is inside B(x, a2 r / rho(x)).
    CertifiedValue c0, a1, a2;
    double small_ball_rho_lo = 1.0, small_ball_rho_hi = 1.0;  // rho(y)/rho(x) there
    // Comparable gauge regime (m(x), m(y) within a factor 2):
    // dhat(x,y) / (rho d) in [c1, C1] with rho at the smaller-gauge end.
    CertifiedValue c1_comp, C1_comp;
    // Separated gauge regime (factor >= 2): dhat(x,y) nu(B_m(x))^{1/sigma} in [c2, C2].
    CertifiedValue c2, C2;
    // Threshold above which ball volumes enter the large-radius regime.
    double c_prime = 0.0;
    RadiusWindow window;
    std::size_t excluded_pairs = 0;
    bool has_comparable_pairs = false;
    bool has_separated_pairs = false;
};

struct TransformOptions {
    // Reject sphericalization inputs whose large-scale perfectness estimate
    // exceeds this (or is infinite) when hard gates are on; flattening always
    // gates hard at the base.
    double kappa_max = 64.0;
    bool hard_perfectness_gate = false;  // sphericalize only; flatten/invert are hard
    unsigned threads = 0;                // 0: resolve from the environment
};

// A deformed space (Z', dhat, nuhat). The base point of the source is dropped
// exactly when the density blows up at 0.
struct DeformedSpace {
    DeformedSpace(FiniteMetricMeasureSpace src, MetricDensityProfile dens)
        : source(std::move(src)), density(std::move(dens)) {}

    FiniteMetricMeasureSpace source;
    std::vector<std::size_t> retained;  // source indices, ascending
    std::vector<double> dhat;           // row-major over retained points
    std::vector<double> nuhat;
    std::vector<double> rho;            // density at each retained point
    MetricDensityProfile density;
    double sigma = 1.0;
    std::optional<int> m0;        // canonical transforms only
    double kappa = 0.0;           // perfectness estimate used, when available
    bool kappa_finite = false;
    bool perfectness_warning = false;
    std::optional<InfinityEstimates> infinity;

    std::size_t size() const noexcept { return retained.size(); }
    double dhat_at(std::size_t i, std::size_t j) const { return dhat[i * size() + j]; }
    double source_radius(std::size_t i) const { return source.radius_of(retained[i]); }
    const std::string& id_of(std::size_t i) const { return source.id_of(retained[i]); }
    double nuhat_total() const;
    // Mass of the open dhat-ball around a retained point.
    double ball_mass(std::size_t center, double radius) const;
    std::vector<double> critical_radii(std::size_t center) const;
    // Repackages (Z', dhat, nuhat) as a plain validated space.
    FiniteMetricMeasureSpace as_space(std::size_t new_base, bool flag_unbounded) const;
};

// inf over chains of sum (rho(x_j) + rho(x_{j-1})) d(x_j, x_{j-1}), as an
// all-pairs shortest path over the complete graph. Deterministic and
// bit-identical for every thread count.
std::vector<double> chain_metric(const std::vector<double>& dist, std::size_t n,
                                 const std::vector<double>& rho, unsigned threads = 0);

// Generic deformation by an explicit density profile.
DeformedSpace deform(const FiniteMetricMeasureSpace& space,
                     const MetricDensityProfile& density, double sigma,
                     unsigned threads = 0);

// Canonical transforms. sphericalize maps an unbounded truncation to a
// bounded space (m0 = 1, adds distance-to-infinity estimates); flatten maps a
// bounded space to an unbounded one (m0 = 0, drops the base); invert is the
// m0 = 0 pipeline on a truncation punctured at its base.
DeformedSpace sphericalize(const FiniteMetricMeasureSpace& space, double sigma,
                           const TransformOptions& opts = {});
DeformedSpace flatten(const FiniteMetricMeasureSpace& space, double sigma,
                      const TransformOptions& opts = {});
DeformedSpace invert(const FiniteMetricMeasureSpace& space, double sigma,
                     const TransformOptions& opts = {});

// Recomputes the interval estimates of d(x, infinity) for a bounded-target
// deformation (finite density at 0).
InfinityEstimates infinity_estimates(const DeformedSpace& d);

// Retained-local index of the natural base: the source base when it survives,
// otherwise the farthest retained point.
std::size_t natural_base(const DeformedSpace& d);

// Tight comparison constants over the valid annulus (canonical deformations).
ConstantsLedger certify_constants(const DeformedSpace& d);
ConstantsLedger certify_constants(const DeformedSpace& d, const RadiusWindow& window);

// Product-weight chain construction (edge cost rho(x) rho(y) d(x, y)) for a
// fixed pair, reporting how far points shortcut it. Demonstrates why additive
// weights are used: with rho decaying faster than 1/t the product metric
// collapses as the truncation grows.
struct ProductDemoReport {
    double d_tilde = 0.0;        // chain infimum for the pair
    double direct_cost = 0.0;    // one-hop cost
    double best_two_hop = 0.0;   // cheapest two-hop chain
    std::size_t best_two_hop_via = 0;
    double via_far_cost = 0.0;   // two-hop chain through the farthest point
    double far_bound = 0.0;      // 2 (rho(z1)+rho(z2)) rho(y_far) |y_far|
    std::size_t far_point = 0;
};
ProductDemoReport product_deform_demo(const FiniteMetricMeasureSpace& space,
                                      const MetricDensityProfile& rho_tilde,
                                      std::size_t z1, std::size_t z2,
                                      unsigned threads = 0);

// Step density sampling a radial function at the critical radii of the base;
// exact at every point radius of the space.
MetricDensityProfile tabulate_radial(const FiniteMetricMeasureSpace& space,
                                     const std::function<double(double)>& fn,
                                     double value_at_zero);

}  // namespace metricdeform
