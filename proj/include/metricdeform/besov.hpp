#pragma once

#include <stdexcept>

#include "metricdeform/deform.hpp"
#include "metricdeform/space.hpp"

namespace metricdeform {

class ZeroDenominator : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};
class DomainMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};
class SigmaMismatch : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct BesovParams {
    double p = 2.0;      // >= 1
    double theta = 0.5;  // > 0
    double sigma() const { return p * theta; }
};

struct BesovEnergy {
    double power = 0.0;  // [u]^p
    double root = 0.0;   // [u]
};

// Discrete double-sum energy
//   [u]^p = sum_{x != y} |u(x)-u(y)|^p / d(x,y)^{theta p}
//             * nu({y}) nu({x}) / nu(B(x, d(x,y)))
// with open balls, so the denominator always contains x; terms where either
// point carries no mass vanish. Accumulation order is fixed (row-major with
// compensation), so results are identical for every thread count.
BesovEnergy besov_energy(const FiniteMetricMeasureSpace& space, const ScalarField& u,
                         const BesovParams& params);
BesovEnergy besov_energy(const DeformedSpace& d, const ScalarField& u,
                         const BesovParams& params);

// [u] + ||u||_{L^p}.
double besov_norm(const FiniteMetricMeasureSpace& space, const ScalarField& u,
                  const BesovParams& params);
double besov_norm(const DeformedSpace& d, const ScalarField& u,
                  const BesovParams& params);

}  // namespace metricdeform
