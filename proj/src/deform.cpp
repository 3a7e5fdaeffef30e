#include "metricdeform/deform.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metricdeform/numeric.hpp"

namespace metricdeform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

}  // namespace

std::vector<double> chain_metric(const std::vector<double>& dist, std::size_t n,
                                 const std::vector<double>& rho, unsigned threads) {
    std::vector<double> d(n * n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j)
            d[i * n + j] = (i == j) ? 0.0 : (rho[i] + rho[j]) * dist[i * n + j];
    }

    // Floyd-Warshall. Within a round, row k is only read (i == k is skipped
    // and column-k relaxations rewrite their current value), so rows can be
    // relaxed concurrently; the partition does not affect the arithmetic.
    const unsigned workers = resolve_thread_count(threads);
    for (std::size_t k = 0; k < n; ++k) {
        const double* rowk = d.data() + k * n;
        parallel_chunks(n, workers, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                if (i == k) continue;
                double* rowi = d.data() + i * n;
                const double dik = rowi[k];
                if (dik == kInf) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    const double via = dik + rowk[j];
                    if (via < rowi[j]) rowi[j] = via;
                }
            }
        });
    }
    return d;
}

double DeformedSpace::nuhat_total() const {
    double sum = 0.0;
    for (double m : nuhat) sum += m;
    return sum;
}

double DeformedSpace::ball_mass(std::size_t center, double radius) const {
    const std::size_t n = size();
    const double* row = dhat.data() + center * n;
    double sum = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        if (row[i] < radius) sum += nuhat[i];
    return sum;
}

std::vector<double> DeformedSpace::critical_radii(std::size_t center) const {
    const std::size_t n = size();
    std::vector<double> vals(dhat.begin() + static_cast<std::ptrdiff_t>(center * n),
                             dhat.begin() + static_cast<std::ptrdiff_t>((center + 1) * n));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

FiniteMetricMeasureSpace DeformedSpace::as_space(std::size_t new_base, bool flag_unbounded) const {
    std::vector<std::string> ids;
    ids.reserve(size());
    for (std::size_t i = 0; i < size(); ++i) ids.push_back(id_of(i));
    return build_space(std::move(ids), dhat, nuhat, new_base, flag_unbounded);
}

DeformedSpace deform(const FiniteMetricMeasureSpace& space,
                     const MetricDensityProfile& density, double sigma,
                     unsigned threads) {
    require(sigma > 0.0 && std::isfinite(sigma), "deform: sigma must be positive and finite");

    DeformedSpace out(space, density);
    out.sigma = sigma;
    if (density.kind() == DensityKind::Canonical) out.m0 = density.m0();

    const bool drop_base = density.infinite_at_zero();
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (drop_base && i == space.base()) continue;
        out.retained.push_back(i);
    }
    require(out.retained.size() >= 2, "deform: fewer than 2 points survive the deformation");

    const std::size_t m = out.retained.size();
    out.rho.resize(m);
    out.nuhat.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t src = out.retained[i];
        const double r = space.radius_of(src);
        const double rho = density.value(r);
        if (!(rho > 0.0) || !std::isfinite(rho)) {
            std::ostringstream os;
            os << "deform: density is " << rho << " at |x| = " << r
               << " (point " << space.id_of(src) << ")";
            throw std::invalid_argument(os.str());
        }
        out.rho[i] = rho;
        out.nuhat[i] = std::pow(rho, sigma) * space.mass(src);
    }

    std::vector<double> dist(m * m);
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < m; ++j)
            dist[i * m + j] = space.distance(out.retained[i], out.retained[j]);
    out.dhat = chain_metric(dist, m, out.rho, threads);
    return out;
}

InfinityEstimates infinity_estimates(const DeformedSpace& d) {
    if (d.density.infinite_at_zero())
        throw std::logic_error("infinity_estimates: the deformed space is unbounded "
                               "(density blows up at 0)");

    const std::size_t n = d.size();
    InfinityEstimates est;

    std::size_t far = 0;
    for (std::size_t i = 1; i < n; ++i)
        if (d.source_radius(i) > d.source_radius(far)) far = i;
    est.far_point = far;
    const double far_radius = d.source_radius(far);

    const double kappa = d.kappa_finite ? d.kappa : 2.0;
    double spread = 0.0;
    bool annulus_hit = false;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == far) continue;
        if (d.source_radius(i) >= far_radius / kappa) {
            spread = std::max(spread, d.dhat_at(far, i));
            annulus_hit = true;
        }
    }
    if (!annulus_hit) {
        // Fall back to the two farthest points.
        est.empty_far_annulus = true;
        std::size_t second = (far == 0) ? 1 : 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (i == far) continue;
            if (d.source_radius(i) > d.source_radius(second)) second = i;
        }
        spread = d.dhat_at(far, second);
    }
    est.spread = spread;

    const double r_max = d.source.max_radius();
    est.intervals.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        est.intervals[i].lo = d.density.integral(d.source_radius(i), r_max);
        est.intervals[i].hi = d.dhat_at(i, far) + spread;
    }
    return est;
}

std::size_t natural_base(const DeformedSpace& d) {
    if (!d.density.infinite_at_zero()) {
        for (std::size_t i = 0; i < d.size(); ++i)
            if (d.retained[i] == d.source.base()) return i;
    }
    std::size_t far = 0;
    for (std::size_t i = 1; i < d.size(); ++i)
        if (d.source_radius(i) > d.source_radius(far)) far = i;
    return far;
}

namespace {

DeformedSpace canonical_transform(const FiniteMetricMeasureSpace& space, int m0,
                                  double sigma, const TransformOptions& opts) {
    const PerfectnessEstimate perf = uniform_perfectness(space, m0);
    const bool gate_ok = perf.finite && perf.kappa <= opts.kappa_max;

    if (!gate_ok) {
        std::ostringstream os;
        os << "uniform perfectness at the base for radii >= " << m0 << " not certified: kappa ";
        if (perf.finite)
            os << "= " << perf.kappa << " exceeds " << opts.kappa_max;
        else
            os << "is infinite (no fillable annulus at radius " << perf.witness_radius << ")";
        if (m0 == 0) throw NotPerfectAtBase(os.str());
        if (opts.hard_perfectness_gate) throw NotPerfectAtLargeScales(os.str());
    }

    const MetricDensityProfile density = MetricDensityProfile::canonical(space, m0, sigma);
    DeformedSpace out = deform(space, density, sigma, opts.threads);
    out.kappa = perf.kappa;
    out.kappa_finite = perf.finite;
    out.perfectness_warning = !gate_ok;
    if (m0 == 1) out.infinity = infinity_estimates(out);
    return out;
}

}  // namespace

DeformedSpace sphericalize(const FiniteMetricMeasureSpace& space, double sigma,
                           const TransformOptions& opts) {
    require(space.unbounded_truncation(),
            "sphericalize: input must be flagged as an unbounded truncation");
    require(space.size() >= 3,
            "sphericalize: a truncation needs at least 3 points to carry far-annulus "
            "structure");
    return canonical_transform(space, 1, sigma, opts);
}

DeformedSpace flatten(const FiniteMetricMeasureSpace& space, double sigma,
                      const TransformOptions& opts) {
    require(!space.unbounded_truncation(),
            "flatten: input is flagged as an unbounded truncation; use invert");
    return canonical_transform(space, 0, sigma, opts);
}

DeformedSpace invert(const FiniteMetricMeasureSpace& space, double sigma,
                     const TransformOptions& opts) {
    require(space.unbounded_truncation(),
            "invert: input must be flagged as an unbounded truncation");
    require(space.size() >= 3,
            "invert: a truncation needs at least 3 points to carry far-annulus structure");
    return canonical_transform(space, 0, sigma, opts);
}

ProductDemoReport product_deform_demo(const FiniteMetricMeasureSpace& space,
                                      const MetricDensityProfile& rho_tilde,
                                      std::size_t z1, std::size_t z2,
                                      unsigned threads) {
    const std::size_t n = space.size();
    require(z1 < n && z2 < n && z1 != z2, "product_deform_demo: need two distinct points");
    require(n >= 3, "product_deform_demo: need a third point to chain through");

    std::vector<double> rho(n);
    for (std::size_t i = 0; i < n; ++i) {
        rho[i] = rho_tilde.value(space.radius_of(i));
        require(std::isfinite(rho[i]) && rho[i] > 0.0,
                "product_deform_demo: density must be positive and finite at every point");
    }

    // Product-weight shortest paths; same relaxation scheme as chain_metric
    // but with multiplicative edge costs.
    std::vector<double> w(n * n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            w[i * n + j] = (i == j) ? 0.0 : rho[i] * rho[j] * space.distance(i, j);

    const unsigned workers = resolve_thread_count(threads);
    for (std::size_t k = 0; k < n; ++k) {
        const double* rowk = w.data() + k * n;
        parallel_chunks(n, workers, [&](std::size_t lo, std::size_t hi) {
            for (std::size_t i = lo; i < hi; ++i) {
                if (i == k) continue;
                double* rowi = w.data() + i * n;
                const double wik = rowi[k];
                for (std::size_t j = 0; j < n; ++j) {
                    const double via = wik + rowk[j];
                    if (via < rowi[j]) rowi[j] = via;
                }
            }
        });
    }

    ProductDemoReport rep;
    rep.d_tilde = w[z1 * n + z2];
    rep.direct_cost = rho[z1] * rho[z2] * space.distance(z1, z2);

    rep.best_two_hop = kInf;
    for (std::size_t y = 0; y < n; ++y) {
        if (y == z1 || y == z2) continue;
        const double cost = rho[z1] * rho[y] * space.distance(z1, y) +
                            rho[z2] * rho[y] * space.distance(z2, y);
        if (cost < rep.best_two_hop) {
            rep.best_two_hop = cost;
            rep.best_two_hop_via = y;
        }
    }

    std::size_t far = (z1 == 0 || z2 == 0) ? ((z1 == 1 || z2 == 1) ? 2 : 1) : 0;
    for (std::size_t y = 0; y < n; ++y) {
        if (y == z1 || y == z2) continue;
        if (space.radius_of(y) > space.radius_of(far)) far = y;
    }
    rep.far_point = far;
    rep.via_far_cost = rho[z1] * rho[far] * space.distance(z1, far) +
                       rho[z2] * rho[far] * space.distance(z2, far);
    rep.far_bound = 2.0 * (rho[z1] + rho[z2]) * rho[far] * space.radius_of(far);
    return rep;
}

MetricDensityProfile tabulate_radial(const FiniteMetricMeasureSpace& space,
                                     const std::function<double(double)>& fn,
                                     double value_at_zero) {
    std::vector<double> breaks = space.base_profile().radii();
    std::vector<double> values(breaks.size());
    for (std::size_t i = 0; i < breaks.size(); ++i) values[i] = fn(breaks[i]);
    return MetricDensityProfile::tabulated(std::move(breaks), std::move(values), value_at_zero);
}

}  // namespace metricdeform
