#include "metricdeform/besov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "metricdeform/numeric.hpp"

namespace metricdeform {

namespace {

void check_params(const BesovParams& params) {
    if (!(params.p >= 1.0) || !std::isfinite(params.p))
        throw std::invalid_argument("besov: p must be finite and >= 1");
    if (!(params.theta > 0.0) || !std::isfinite(params.theta))
        throw std::invalid_argument("besov: theta must be finite and positive");
}

void check_field(const ScalarField& u, std::size_t n) {
    if (u.size() != n)
        throw DomainMismatch("besov: field length " + std::to_string(u.size()) +
                             " does not match the space size " + std::to_string(n));
    for (double v : u)
        if (!std::isfinite(v)) throw DomainMismatch("besov: field values must be finite");
}

// Per-center open-ball masses resolved through sorted prefix sums.
class BallMassIndex {
public:
    BallMassIndex(const double* row, const std::vector<double>& mass, std::size_t n) {
        values_.reserve(n);
        std::vector<std::size_t> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return row[a] < row[b]; });
        double acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double v = row[order[k]];
            if (values_.empty() || values_.back() != v) {
                values_.push_back(v);
                below_.push_back(acc);  // mass strictly below v
            }
            acc += mass[order[k]];
        }
        total_ = acc;
    }

    double mass_below(double r) const {
        auto it = std::lower_bound(values_.begin(), values_.end(), r);
        if (it == values_.end()) return total_;
        // Either r is a stored value (strict mass sits right before it) or it
        // falls in a gap, where everything below the next stored value counts.
        return below_[static_cast<std::size_t>(it - values_.begin())];
    }

private:
    std::vector<double> values_;  // distinct row values, ascending
    std::vector<double> below_;   // mass strictly below each value
    double total_ = 0.0;
};

BesovEnergy energy_kernel(std::size_t n, const std::vector<double>& dist,
                          const std::vector<double>& mass, const ScalarField& u,
                          const BesovParams& params) {
    const double exponent = params.theta * params.p;
    CompensatedSum total;
    for (std::size_t x = 0; x < n; ++x) {
        if (mass[x] == 0.0) continue;
        const double* row = dist.data() + x * n;
        const BallMassIndex index(row, mass, n);
        for (std::size_t y = 0; y < n; ++y) {
            if (y == x || mass[y] == 0.0) continue;
            const double diff = std::abs(u[x] - u[y]);
            if (diff == 0.0) continue;
            const double ball = index.mass_below(row[y]);
            if (ball <= 0.0)
                throw ZeroDenominator("besov: empty ball under a nonzero increment");
            total.add(std::pow(diff, params.p) / std::pow(row[y], exponent) *
                      (mass[x] * mass[y] / ball));
        }
    }
    BesovEnergy e;
    e.power = total.value();
    e.root = std::pow(e.power, 1.0 / params.p);
    return e;
}

double lp_norm(std::size_t n, const std::vector<double>& mass, const ScalarField& u,
               double p) {
    CompensatedSum s;
    for (std::size_t i = 0; i < n; ++i)
        s.add(std::pow(std::abs(u[i]), p) * mass[i]);
    return std::pow(s.value(), 1.0 / p);
}

}  // namespace

BesovEnergy besov_energy(const FiniteMetricMeasureSpace& space, const ScalarField& u,
                         const BesovParams& params) {
    check_params(params);
    check_field(u, space.size());
    return energy_kernel(space.size(), space.distance_matrix(), space.masses(), u, params);
}

BesovEnergy besov_energy(const DeformedSpace& d, const ScalarField& u,
                         const BesovParams& params) {
    check_params(params);
    check_field(u, d.size());
    return energy_kernel(d.size(), d.dhat, d.nuhat, u, params);
}

double besov_norm(const FiniteMetricMeasureSpace& space, const ScalarField& u,
                  const BesovParams& params) {
    return besov_energy(space, u, params).root +
           lp_norm(space.size(), space.masses(), u, params.p);
}

double besov_norm(const DeformedSpace& d, const ScalarField& u, const BesovParams& params) {
    return besov_energy(d, u, params).root + lp_norm(d.size(), d.nuhat, u, params.p);
}

}  // namespace metricdeform
