#include "metricdeform/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "metricdeform/numeric.hpp"

namespace metricdeform {

RadiusWindow valid_annulus(const FiniteMetricMeasureSpace& space) {
    return {space.min_positive_distance(), space.max_radius() / 4.0};
}

DoublingEstimate doubling_constant(const FiniteMetricMeasureSpace& space, RadiiPolicy policy) {
    DoublingEstimate est;
    est.policy = policy;
    est.window = valid_annulus(space);

    const std::size_t n = space.size();
    for (std::size_t c = 0; c < n; ++c) {
        // The ratio r -> nu(B(c,2r))/nu(B(c,r)) is a step function whose
        // breakpoints are the critical radii of c and their halves; sampling
        // those plus midpoints covers every piece exactly.
        std::vector<double> breaks = space.critical_radii(c);
        const std::size_t ncrit = breaks.size();
        breaks.reserve(2 * ncrit);
        for (std::size_t k = 0; k < ncrit; ++k) breaks.push_back(breaks[k] / 2.0);
        std::sort(breaks.begin(), breaks.end());
        breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());
        const std::vector<double> grid = with_midpoints(breaks);

        for (double r : grid) {
            if (r <= 0.0) continue;
            if (policy == RadiiPolicy::ValidAnnulus && !est.window.contains(r)) continue;
            const double inner = space.ball_mass(c, r);
            if (inner <= 0.0) continue;
            const double ratio = space.ball_mass(c, 2.0 * r) / inner;
            if (ratio > est.constant) {
                est.constant = ratio;
                est.witness_point = c;
                est.witness_radius = r;
            }
        }
    }
    return est;
}

PerfectnessEstimate uniform_perfectness(const FiniteMetricMeasureSpace& space, int m0) {
    if (m0 != 0 && m0 != 1)
        throw std::invalid_argument("uniform_perfectness: m0 must be 0 or 1");

    PerfectnessEstimate est;
    est.m0 = m0;
    est.floor = (m0 == 1) ? 1.0 : space.min_positive_distance();

    // Occupied shells: distinct positive distances from the base.
    std::vector<double> shells = space.base_profile().radii();
    shells.erase(std::remove_if(shells.begin(), shells.end(),
                                [&](double c) { return c < est.floor || c <= 0.0; }),
                 shells.end());

    if (shells.empty()) {
        // Nothing at or beyond the floor: annuli at those radii can never be
        // filled, e.g. a truncation whose every point sits inside radius m0.
        est.kappa = std::numeric_limits<double>::infinity();
        est.finite = false;
        est.witness_radius = est.floor;
        return est;
    }

    std::vector<double> breaks;
    if (est.floor < shells.front()) breaks.push_back(est.floor);
    breaks.insert(breaks.end(), shells.begin(), shells.end());

    // For r in (b_i, b_{i+1}] the nearest shell at or beyond r is b_{i+1}, so
    // the binding requirement over the whole range is the largest consecutive
    // ratio; it is sharp as r approaches b_i from above.
    double worst = 1.0;
    double witness = breaks.front();
    for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
        const double ratio = breaks[i + 1] / breaks[i];
        if (ratio > worst) {
            worst = ratio;
            witness = breaks[i];
        }
    }
    est.kappa = worst * (1.0 + kStrictPad);
    est.finite = true;
    est.witness_radius = witness;
    est.annuli_checked = breaks.size();
    return est;
}

ReverseDoublingFit reverse_doubling_fit(const FiniteMetricMeasureSpace& space, int m0) {
    const PerfectnessEstimate perf = uniform_perfectness(space, m0);
    if (!perf.finite)
        throw FitFailed("reverse_doubling_fit: space is not uniformly perfect at the base "
                        "for radii >= m0");

    ReverseDoublingFit fit;
    fit.kappa = perf.kappa;
    fit.range_lo = static_cast<double>(m0);
    fit.range_hi = 2.0 * space.max_radius();

    const BallProfile& profile = space.base_profile();
    const double factor = 4.0 * perf.kappa;

    // Growth scan across scales `factor` apart, keeping the enlarged ball
    // strictly inside the truncation so boundary saturation cannot drag the
    // exponent down.
    const double t_lo = std::max(static_cast<double>(m0), perf.floor);
    const double t_hi = space.max_radius() / factor;
    const std::vector<double> grid = with_midpoints(profile.radii());
    double growth = std::numeric_limits<double>::infinity();
    for (double t : grid) {
        if (t < t_lo || t >= t_hi) continue;
        const double inner = profile.mass_below(t);
        if (inner <= 0.0) continue;
        growth = std::min(growth, profile.mass_below(factor * t) / inner);
    }

    if (!std::isfinite(growth)) {
        // No scale admits the scan (single-scale spaces); any exponent
        // certifies vacuously on the critical-radius pairs below.
        fit.vacuous = true;
        fit.growth_factor = 1.0;
        fit.alpha = 1.0;
    } else {
        fit.growth_factor = growth;
        if (growth <= 1.0)
            throw FitFailed("reverse_doubling_fit: no mass growth across scales; "
                            "no positive exponent certifies");
        fit.alpha = std::log(growth) / std::log(factor);
    }

    // Certify nu(B_r)/nu(B_R) <= lambda (r/R)^alpha on all critical-radius
    // pairs in [m0, 2 R_inf), enlarging lambda as needed.
    double lambda = 1.0;
    const std::vector<double>& radii = profile.radii();
    for (std::size_t a = 0; a < radii.size(); ++a) {
        if (radii[a] < fit.range_lo || radii[a] >= fit.range_hi) continue;
        const double num = profile.mass_below(radii[a]);
        if (num <= 0.0) continue;
        for (std::size_t b = a + 1; b < radii.size(); ++b) {
            if (radii[b] >= fit.range_hi) break;
            const double den = profile.mass_below(radii[b]);
            if (den <= 0.0) continue;
            const double needed = (num / den) * std::pow(radii[b] / radii[a], fit.alpha);
            lambda = std::max(lambda, needed);
        }
    }
    fit.lambda = lambda;
    return fit;
}

double measure_inverse(const FiniteMetricMeasureSpace& space, double t) {
    const double total = space.total_mass();
    if (total <= 0.0) throw DegenerateMeasure("measure_inverse: total mass is zero");
    if (!(t >= 0.0) || t >= total)
        throw OutOfRange("measure_inverse: t must lie in [0, nu(Z))");

    // Smallest critical radius whose closed shell mass exceeds t; below it the
    // open ball holds at most t, just above it more.
    const BallProfile& profile = space.base_profile();
    const std::vector<double>& cum = profile.cumulative();
    for (std::size_t k = 0; k < cum.size(); ++k)
        if (cum[k] > t) return profile.radii()[k];
    return profile.radii().back();  // unreachable: cum.back() == nu(Z) > t
}

}  // namespace metricdeform
