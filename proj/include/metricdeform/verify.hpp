#pragma once

#include <string>
#include <utility>
#include <vector>

#include "metricdeform/besov.hpp"
#include "metricdeform/deform.hpp"
#include "metricdeform/report.hpp"
#include "metricdeform/space.hpp"

namespace metricdeform {

// Every checker is pure and returns reports keyed by a stable statement id.
// Ratios are regression quantities: the statements assert comparability, so
// acceptance tracks window stability across refinement rather than absolute
// values. Statements that are exact inequalities additionally count
// violations in extra["violations"].

// Statements: "energy-pair-ratio" (per ordered pair, the deformed Besov
// integrand over the source one, cases tallied by gauge regime) and
// "energy-global" (one ratio per field, witness [field, "global"]).
// Throws SigmaMismatch when the deformation sigma differs from p*theta,
// unless explicitly allowed (negative controls).
std::vector<ComparabilityReport> check_energy_comparability(
    const FiniteMetricMeasureSpace& space, const DeformedSpace& deformed,
    const std::vector<std::pair<std::string, ScalarField>>& fields,
    const BesovParams& params, bool allow_sigma_mismatch = false);

// "doubling-preservation": doubling constant of the deformed measure over the
// deformed valid annulus; source constant recorded in extra.
ComparabilityReport check_doubling_preservation(const DeformedSpace& deformed);

// Ball-volume statements of a canonical deformation:
//   "ball-volume-small":  nuhat(Bhat(x,r)) vs rho(x)^sigma nu(B(x, r/rho(x)))
//   "ball-volume-middle": nuhat(Bhat(x,r)) vs m(x)^{-sigma}
//   "ball-volume-large":  nuhat(Bhat(x,r)) vs nu^{-1}(r^{-sigma})^{-sigma}
//   "ball-volume-total":  nuhat(Bhat(x,r)) vs nuhat(Z') past the threshold
//   "tail-mass":          nuhat over { |y| >= r } vs m(r)^{-sigma}
//   "measure-inverse-doubling": nu^{-1}(2t) vs nu^{-1}(t)
std::vector<ComparabilityReport> check_ball_volume_regimes(const DeformedSpace& deformed);

// "perfectness-preservation". Bounded targets certify annuli around the
// virtual far point against all realizations of the interval estimates;
// unbounded targets run the perfectness estimator at the farthest point on
// the deformed metric for radii >= 1. An infinite estimate is reported via
// extra["infinite"], never thrown.
ComparabilityReport check_perfectness_preservation(const DeformedSpace& deformed);

enum class DualityDirection { SphereThenFlatten, FlattenThenSphere };

// Composes the two canonical transforms and compares the round trip with the
// original space over the source valid annulus:
//   "duality-metric":          dtilde(x,y) / d(x,y)
//   "duality-measure":         nutilde({x}) / nu({x})
//   "duality-density-product": rho(x) * rhohat(x)
std::vector<ComparabilityReport> duality_report(const FiniteMetricMeasureSpace& space,
                                                double sigma, DualityDirection direction,
                                                unsigned threads = 0);

// Pairwise bound battery:
//   "sandwich-lower":        dhat / (inf_{B(x,d(x,y))} rho * d)      >= 1
//   "sandwich-upper":        dhat / ((rho(x)+rho(y)) d)              <= 1
//   "radial-lower-bound":    dhat / int_{|x|}^{|y|} rho              >= 1
//   "chain-upper-bound":     dhat (kappa-1) / (8 kappa^3 int)        <= 1
//   "separation-lower":      dhat * nu(B_{m(x)})^{1/sigma}   (m(y) >= 2 m(x))
//   "comparable-regime":     dhat / (rho d)                  (gauges within 2x)
//   "ball-shape-inner":      first excluded point's rho d / (a1 r)   >= 1
//   "ball-shape-outer":      farthest member's rho d / (a2 r)        <= 1
//   "near-implies-comparable": m(x)/m(y) for pairs with dhat below C2 scale
//   "distance-to-infinity":  interval ends * nu(B_{m(x)})^{1/sigma}
// Gauge-dependent statements are emitted only for canonical deformations; the
// chain upper bound is reported as not applicable when kappa is infinite.
std::vector<ComparabilityReport> check_sandwich_and_bounds(
    const FiniteMetricMeasureSpace& space, const DeformedSpace& deformed);

}  // namespace metricdeform
