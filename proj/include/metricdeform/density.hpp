#pragma once

#include <stdexcept>
#include <vector>

#include "metricdeform/space.hpp"

namespace metricdeform {

class ZeroBallMass : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class DensityKind { Canonical, Tabulated };

// Nonincreasing metric density rho(t) of the radial coordinate, finite on
// (0, inf) and possibly +inf at 0. Two kinds:
//  - Canonical: rho(t) = 1 / (m(t) nu(B_{m(t)})^{1/sigma}) with m(t) = t + m0,
//    built from the base-centered ball profile of a space. m0 = 1 gives the
//    bounded-target gauge, m0 = 0 the unbounded one (rho blows up at 0 and
//    the base point leaves the deformed space).
//  - Tabulated: a step function given by breakpoints and values, with an
//    independent value at 0.
// Integrals are evaluated in closed form piece by piece, so quadrature adds
// no approximation error beyond rounding.
class MetricDensityProfile {
public:
    static MetricDensityProfile canonical(const FiniteMetricMeasureSpace& space,
                                          int m0, double sigma);
    static MetricDensityProfile tabulated(std::vector<double> breakpoints,
                                          std::vector<double> values,
                                          double value_at_zero);

    DensityKind kind() const noexcept { return kind_; }
    // Canonical parameters; throws for tabulated profiles.
    int m0() const;
    double sigma() const;

    double value(double t) const;
    bool infinite_at_zero() const;
    // Exact integral of rho over [a, b], 0 <= a <= b. Returns +inf when the
    // profile is non-integrable at the left end (canonical m0 = 0 with a = 0).
    double integral(double a, double b) const;

    const std::vector<double>& breakpoints() const noexcept { return breakpoints_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    MetricDensityProfile() = default;

    DensityKind kind_ = DensityKind::Tabulated;
    int m0_ = 0;
    double sigma_ = 1.0;
    // Canonical: breakpoints_ holds the profile radii s_k and values_ the ball
    // masses nu(B(b, s)) on (s_k, s_{k+1}]. Tabulated: plain step data.
    std::vector<double> breakpoints_;
    std::vector<double> values_;
    double value_at_zero_ = 0.0;
};

}  // namespace metricdeform
