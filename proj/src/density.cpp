#include "metricdeform/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace metricdeform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Step lookup used for the canonical ball-mass data: mass strictly below s.
double step_mass_below(const std::vector<double>& radii, const std::vector<double>& cum,
                       double s) {
    auto it = std::lower_bound(radii.begin(), radii.end(), s);
    if (it == radii.begin()) return 0.0;
    return cum[static_cast<std::size_t>(it - radii.begin()) - 1];
}

}  // namespace

MetricDensityProfile MetricDensityProfile::canonical(const FiniteMetricMeasureSpace& space,
                                                     int m0, double sigma) {
    if (m0 != 0 && m0 != 1)
        throw std::invalid_argument("canonical density: m0 must be 0 or 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
        throw std::invalid_argument("canonical density: sigma must be positive and finite");

    const BallProfile& profile = space.base_profile();
    if (m0 == 1 && step_mass_below(profile.radii(), profile.cumulative(), 1.0) <= 0.0)
        throw ZeroBallMass("canonical density: nu(B_1) = 0, the m0 = 1 gauge is undefined");
    if (m0 == 0 && profile.cumulative().front() <= 0.0)
        throw ZeroBallMass("canonical density: nu(B_{|x|}) = 0 at the innermost point because "
                           "the base carries no mass; set mass(base) > 0 or use m0 = 1");

    MetricDensityProfile d;
    d.kind_ = DensityKind::Canonical;
    d.m0_ = m0;
    d.sigma_ = sigma;
    d.breakpoints_ = profile.radii();
    d.values_ = profile.cumulative();
    d.value_at_zero_ = (m0 == 0) ? kInf : 0.0;  // recomputed on demand for m0 = 1
    return d;
}

MetricDensityProfile MetricDensityProfile::tabulated(std::vector<double> breakpoints,
                                                     std::vector<double> values,
                                                     double value_at_zero) {
    if (breakpoints.empty() || breakpoints.size() != values.size())
        throw std::invalid_argument("tabulated density: need matching nonempty breakpoints/values");
    if (breakpoints.front() != 0.0)
        throw std::invalid_argument("tabulated density: first breakpoint must be 0");
    for (std::size_t i = 1; i < breakpoints.size(); ++i)
        if (!(breakpoints[i] > breakpoints[i - 1]))
            throw std::invalid_argument("tabulated density: breakpoints must increase strictly");
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]) || values[i] <= 0.0)
            throw std::invalid_argument("tabulated density: values must be positive and finite");
        if (i > 0 && values[i] > values[i - 1])
            throw std::invalid_argument("tabulated density: values must be nonincreasing");
    }
    if (std::isnan(value_at_zero) || value_at_zero < values.front())
        throw std::invalid_argument("tabulated density: value at 0 must dominate the first step");

    MetricDensityProfile d;
    d.kind_ = DensityKind::Tabulated;
    d.breakpoints_ = std::move(breakpoints);
    d.values_ = std::move(values);
    d.value_at_zero_ = value_at_zero;
    return d;
}

int MetricDensityProfile::m0() const {
    if (kind_ != DensityKind::Canonical)
        throw std::logic_error("m0 is only defined for canonical densities");
    return m0_;
}

double MetricDensityProfile::sigma() const {
    if (kind_ != DensityKind::Canonical)
        throw std::logic_error("sigma is only defined for canonical densities");
    return sigma_;
}

bool MetricDensityProfile::infinite_at_zero() const {
    if (kind_ == DensityKind::Canonical) return m0_ == 0;
    return value_at_zero_ == kInf;
}

double MetricDensityProfile::value(double t) const {
    if (!(t >= 0.0)) throw std::invalid_argument("density value: t must be >= 0");
    if (kind_ == DensityKind::Tabulated) {
        if (t == 0.0) return value_at_zero_;
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), t);
        return values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
    }
    const double s = t + m0_;
    if (s == 0.0) return kInf;
    const double ball = step_mass_below(breakpoints_, values_, s);
    return 1.0 / (s * std::pow(ball, 1.0 / sigma_));
}

double MetricDensityProfile::integral(double a, double b) const {
    if (!(a >= 0.0) || !(b >= a))
        throw std::invalid_argument("density integral: need 0 <= a <= b");
    if (a == b) return 0.0;

    if (kind_ == DensityKind::Tabulated) {
        // The isolated value at 0 has measure zero; each piece uses the step
        // value of the open interval it covers.
        double acc = 0.0;
        double t1 = a;
        auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), a);
        while (t1 < b) {
            const double t2 = (it != breakpoints_.end()) ? std::min(*it, b) : b;
            const double v = values_[static_cast<std::size_t>(it - breakpoints_.begin()) - 1];
            acc += v * (t2 - t1);
            t1 = t2;
            if (it != breakpoints_.end() && *it <= t1) ++it;
        }
        return acc;
    }

    const double s1 = a + m0_;
    const double s2 = b + m0_;
    if (s1 == 0.0) return kInf;  // the 1/s factor is non-integrable at 0

    // Piecewise: on (c_k, c_{k+1}] the ball mass is constant, so the integral
    // of 1/(s nu^{1/sigma}) is nu^{-1/sigma} log(s2/s1).
    double acc = 0.0;
    double t1 = s1;
    auto it = std::upper_bound(breakpoints_.begin(), breakpoints_.end(), s1);
    while (t1 < s2) {
        const double t2 = (it != breakpoints_.end()) ? std::min(*it, s2) : s2;
        const double ball = step_mass_below(breakpoints_, values_, t2);
        acc += std::pow(ball, -1.0 / sigma_) * (std::log(t2) - std::log(t1));
        t1 = t2;
        if (it != breakpoints_.end() && *it <= t1) ++it;
    }
    return acc;
}

}  // namespace metricdeform
