#include "metricdeform/verify.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>

#include "metricdeform/analysis.hpp"
#include "metricdeform/numeric.hpp"

namespace metricdeform {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
// Slack for inequalities that hold exactly in exact arithmetic; covers the
// rounding of long shortest-path sums.
constexpr double kRelSlack = 1e-9;

std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

ComparabilityReport make_report(const char* statement) {
    ComparabilityReport r;
    r.statement = statement;
    return r;
}

void mark_not_applicable(ComparabilityReport& r) {
    r.extra["not_applicable"] = 1.0;
}

// Sorted view of one matrix row: open-ball mass and the running minimum of an
// optional companion field, queried by radius in O(log n). Tie order is fixed
// by index, so sums are deterministic.
class RowView {
public:
    RowView(const double* row, const double* mass, const double* companion, std::size_t n) {
        std::vector<std::size_t> order(n);
        for (std::size_t k = 0; k < n; ++k) order[k] = k;
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            if (row[a] != row[b]) return row[a] < row[b];
            return a < b;
        });
        dist_.reserve(n);
        cum_.reserve(n);
        runmin_.reserve(n);
        double acc = 0.0;
        double mn = kInf;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t idx = order[k];
            acc += mass[idx];
            if (companion) mn = std::min(mn, companion[idx]);
            if (k + 1 == n || row[order[k + 1]] != row[idx]) {
                dist_.push_back(row[idx]);
                cum_.push_back(acc);
                runmin_.push_back(mn);
            }
        }
    }

    double mass_below(double r) const {
        const auto it = std::lower_bound(dist_.begin(), dist_.end(), r);
        if (it == dist_.begin()) return 0.0;
        return cum_[static_cast<std::size_t>(it - dist_.begin()) - 1];
    }

    double min_below(double r) const {
        const auto it = std::lower_bound(dist_.begin(), dist_.end(), r);
        if (it == dist_.begin()) return kInf;
        return runmin_[static_cast<std::size_t>(it - dist_.begin()) - 1];
    }

private:
    std::vector<double> dist_, cum_, runmin_;
};

struct CanonicalView {
    int m0 = 0;
    double sigma = 1.0;
    std::vector<double> gauge;  // m(x) = |x| + m0
    std::vector<double> ballm;  // nu(B_{m(x)})
    std::vector<double> scale;  // nu(B_{m(x)})^{-1/sigma}
};

std::optional<CanonicalView> canonical_view(const DeformedSpace& d) {
    if (d.density.kind() != DensityKind::Canonical || !d.m0) return std::nullopt;
    CanonicalView v;
    v.m0 = *d.m0;
    v.sigma = d.sigma;
    const BallProfile& prof = d.source.base_profile();
    const std::size_t n = d.size();
    v.gauge.resize(n);
    v.ballm.resize(n);
    v.scale.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        v.gauge[i] = d.source_radius(i) + v.m0;
        v.ballm[i] = prof.mass_below(v.gauge[i]);
        v.scale[i] = std::pow(v.ballm[i], -1.0 / v.sigma);
    }
    return v;
}

}  // namespace

std::vector<ComparabilityReport> check_energy_comparability(
    const FiniteMetricMeasureSpace& space, const DeformedSpace& deformed,
    const std::vector<std::pair<std::string, ScalarField>>& fields,
    const BesovParams& params, bool allow_sigma_mismatch) {
    if (!(params.p >= 1.0) || !(params.theta > 0.0))
        throw std::invalid_argument("besov parameters: need p >= 1 and theta > 0");
    const double tp = params.p * params.theta;
    if (!allow_sigma_mismatch &&
        std::abs(deformed.sigma - params.sigma()) >
            1e-12 * std::max(1.0, std::abs(deformed.sigma)))
        throw SigmaMismatch("deformation sigma " + fmt_g(deformed.sigma) +
                            " differs from p*theta = " + fmt_g(params.sigma()) +
                            "; pass the mismatch flag only for negative controls");
    for (const auto& [name, u] : fields)
        if (u.size() != space.size())
            throw DomainMismatch("field '" + name + "' has " + std::to_string(u.size()) +
                                 " entries for a space of " + std::to_string(space.size()));

    const auto view = canonical_view(deformed);
    std::optional<ConstantsLedger> led;
    if (view) led = certify_constants(deformed);

    ComparabilityReport pair_rep = make_report("energy-pair-ratio");
    if (view) pair_rep.cases = {{"1a", 0}, {"1b", 0}, {"2", 0}};
    ComparabilityReport glob = make_report("energy-global");

    const std::size_t m = deformed.size();
    const std::size_t n = space.size();
    std::vector<CompensatedSum> src_sum(fields.size()), def_sum(fields.size());

    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t si = deformed.retained[i];
        const RowView src_row(&space.distance_matrix()[si * n], space.masses().data(),
                              nullptr, n);
        const RowView def_row(&deformed.dhat[i * m], deformed.nuhat.data(), nullptr, m);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const std::size_t sj = deformed.retained[j];
            const double dist = space.distance(si, sj);
            const double dh = deformed.dhat_at(i, j);
            const double src_ball = src_row.mass_below(dist);
            const double def_ball = def_row.mass_below(dh);
            if (!(src_ball > 0.0) || !(def_ball > 0.0)) {
                ++pair_rep.excluded;
                continue;
            }
            const double ratio = std::pow(deformed.rho[i] * deformed.rho[j], deformed.sigma) *
                                 std::pow(dist / dh, tp) * src_ball / def_ball;
            pair_rep.absorb(ratio, deformed.id_of(i), deformed.id_of(j));
            if (view) {
                const std::size_t a = (view->gauge[i] <= view->gauge[j]) ? i : j;
                const std::size_t b = (a == i) ? j : i;
                if (view->gauge[b] >= 2.0 * view->gauge[a])
                    ++pair_rep.cases["2"];
                else if (dh <= led->c0.value * view->scale[a])
                    ++pair_rep.cases["1a"];
                else
                    ++pair_rep.cases["1b"];
            }
            const double mass_prod = space.mass(si) * space.mass(sj);
            if (!(mass_prod > 0.0)) continue;
            for (std::size_t k = 0; k < fields.size(); ++k) {
                const double du = fields[k].second[si] - fields[k].second[sj];
                if (du == 0.0) continue;
                const double num = std::pow(std::abs(du), params.p);
                src_sum[k].add(num / std::pow(dist, tp) * mass_prod / src_ball);
                def_sum[k].add(num / std::pow(dh, tp) * deformed.nuhat[i] *
                               deformed.nuhat[j] / def_ball);
            }
        }
    }
    pair_rep.pin_if_empty();

    std::size_t zero_over_zero = 0;
    for (std::size_t k = 0; k < fields.size(); ++k) {
        const double sp = src_sum[k].value();
        const double dp = def_sum[k].value();
        double ratio = 1.0;
        if (sp > 0.0 && dp > 0.0)
            ratio = dp / sp;
        else if (sp == 0.0 && dp == 0.0)
            ++zero_over_zero;
        else
            ratio = (dp > 0.0) ? kInf : 0.0;
        glob.absorb(ratio, fields[k].first, "global");
    }
    if (zero_over_zero > 0) {
        glob.degenerate = true;
        glob.extra["zero_over_zero"] = static_cast<double>(zero_over_zero);
    }
    glob.pin_if_empty();
    return {pair_rep, glob};
}

ComparabilityReport check_doubling_preservation(const DeformedSpace& deformed) {
    ComparabilityReport rep = make_report("doubling-preservation");
    const FiniteMetricMeasureSpace reshaped =
        deformed.as_space(natural_base(deformed), deformed.density.infinite_at_zero());
    const DoublingEstimate est = doubling_constant(reshaped, RadiiPolicy::ValidAnnulus);
    const DoublingEstimate src = doubling_constant(deformed.source, RadiiPolicy::ValidAnnulus);
    rep.absorb(est.constant, reshaped.id_of(est.witness_point), "");
    rep.extra["C_nu_source"] = src.constant;
    rep.extra["witness_radius"] = est.witness_radius;
    return rep;
}

std::vector<ComparabilityReport> check_ball_volume_regimes(const DeformedSpace& deformed) {
    ComparabilityReport small = make_report("ball-volume-small");
    ComparabilityReport middle = make_report("ball-volume-middle");
    ComparabilityReport large = make_report("ball-volume-large");
    ComparabilityReport total = make_report("ball-volume-total");
    ComparabilityReport tail = make_report("tail-mass");
    ComparabilityReport invdbl = make_report("measure-inverse-doubling");

    const auto view = canonical_view(deformed);
    if (!view) {
        for (ComparabilityReport* r : {&small, &middle, &large, &total, &tail, &invdbl}) {
            mark_not_applicable(*r);
            r->pin_if_empty();
        }
        return {small, middle, large, total, tail, invdbl};
    }

    const ConstantsLedger led = certify_constants(deformed);
    const FiniteMetricMeasureSpace& space = deformed.source;
    const std::size_t m = deformed.size();
    const std::size_t n = space.size();
    const double sigma = view->sigma;
    const double nu_total = space.total_mass();
    const double nuhat_total = deformed.nuhat_total();
    const double nu_b1 = space.base_profile().mass_below(1.0);
    // Radius beyond which a deformed ball swallows a fixed share of the whole
    // space; finite only for bounded targets.
    const double total_threshold =
        (view->m0 == 1 && nu_b1 > 0.0) ? led.c2.value * std::pow(nu_b1, -1.0 / sigma) : kInf;

    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t si = deformed.retained[i];
        const RowView def_row(&deformed.dhat[i * m], deformed.nuhat.data(), nullptr, m);
        const RowView src_row(&space.distance_matrix()[si * n], space.masses().data(),
                              nullptr, n);
        const double sc = view->scale[i];
        const std::string id = deformed.id_of(i);

        for (const double f : {0.25, 0.5, 1.0}) {
            const double r = f * led.c0.value * sc;
            if (!(r > 0.0)) {
                ++small.excluded;
                continue;
            }
            const double dmass = def_row.mass_below(r);
            const double smass = src_row.mass_below(r / deformed.rho[i]);
            if (!(dmass > 0.0) || !(smass > 0.0)) {
                ++small.excluded;
                continue;
            }
            small.absorb(dmass / (std::pow(deformed.rho[i], sigma) * smass), id, fmt_g(r));
        }

        const double gauge_pow = std::pow(view->gauge[i], sigma);
        for (double f = led.c0.value;; f *= 2.0) {
            const bool last = f >= led.c_prime;
            const double r = (last ? led.c_prime : f) * sc;
            const double dmass = def_row.mass_below(r);
            if (dmass > 0.0)
                middle.absorb(dmass * gauge_pow, id, fmt_g(r));
            else
                ++middle.excluded;
            if (last) break;
        }

        for (const double f : {1.5, 3.0, 6.0}) {
            const double r = f * led.c_prime * sc;
            const double dmass = def_row.mass_below(r);
            if (!(dmass > 0.0)) {
                ++large.excluded;
                continue;
            }
            if (r <= total_threshold) {
                const double t = std::pow(r, -sigma);
                if (!(t < nu_total)) {
                    ++large.excluded;
                    continue;
                }
                const double rinv = measure_inverse(space, t);
                if (!(rinv > 0.0)) {
                    ++large.excluded;
                    continue;
                }
                large.absorb(dmass * std::pow(rinv, sigma), id, fmt_g(r));
            } else {
                total.absorb(dmass / nuhat_total, id, fmt_g(r));
            }
        }
    }

    {
        std::vector<double> radii;
        for (const double r : space.base_profile().radii())
            if (r > 0.0 && r < space.max_radius() / 2.0) radii.push_back(r);
        radii = with_midpoints(radii);
        for (const double r : radii) {
            double tail_mass = 0.0;
            for (std::size_t i = 0; i < m; ++i)
                if (deformed.source_radius(i) >= r) tail_mass += deformed.nuhat[i];
            if (!(tail_mass > 0.0)) {
                ++tail.excluded;
                continue;
            }
            tail.absorb(tail_mass * std::pow(r + view->m0, sigma), fmt_g(r), "");
        }
    }

    {
        std::vector<double> ts(space.base_profile().cumulative());
        std::sort(ts.begin(), ts.end());
        ts.erase(std::unique(ts.begin(), ts.end()), ts.end());
        ts = with_midpoints(ts);
        const double t_lo = (view->m0 == 1) ? nu_b1 : 0.0;
        for (const double t : ts) {
            if (t < t_lo || !(t < nu_total / 2.0)) continue;
            const double r1 = measure_inverse(space, t);
            if (!(r1 > 0.0)) {
                ++invdbl.excluded;
                continue;
            }
            invdbl.absorb(measure_inverse(space, 2.0 * t) / r1, fmt_g(t), "");
        }
    }

    for (ComparabilityReport* r : {&small, &middle, &large, &total, &tail, &invdbl})
        r->pin_if_empty();
    return {small, middle, large, total, tail, invdbl};
}

ComparabilityReport check_perfectness_preservation(const DeformedSpace& deformed) {
    ComparabilityReport rep = make_report("perfectness-preservation");

    if (deformed.density.infinite_at_zero()) {
        const FiniteMetricMeasureSpace reshaped =
            deformed.as_space(natural_base(deformed), true);
        const PerfectnessEstimate est = uniform_perfectness(reshaped, 1);
        if (est.finite) {
            rep.absorb(est.kappa, reshaped.id_of(reshaped.base()), "");
            rep.extra["floor"] = est.floor;
            rep.extra["witness_radius"] = est.witness_radius;
        } else {
            rep.extra["infinite"] = 1.0;
        }
        rep.pin_if_empty();
        return rep;
    }

    // Bounded target: annuli around the virtual far point, certified against
    // every realization of the distance intervals. A point is certainly in
    // the annulus [r, kappa r) when its lower bound is >= r and its upper
    // bound is < kappa r; the resolution floor is the best certain upper
    // bound, since no annulus below it can be certified nonempty.
    const InfinityEstimates est =
        deformed.infinity ? *deformed.infinity : infinity_estimates(deformed);
    const std::size_t m = deformed.size();
    std::vector<std::size_t> order(m);
    for (std::size_t i = 0; i < m; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (est.intervals[a].lo != est.intervals[b].lo)
            return est.intervals[a].lo < est.intervals[b].lo;
        return a < b;
    });
    double floor_r = kInf;
    for (std::size_t i = 0; i < m; ++i) floor_r = std::min(floor_r, est.intervals[i].hi);

    // suffix_hi[k]: the smallest certain upper bound among points whose lower
    // bound is at least est.intervals[order[k]].lo.
    std::vector<double> suffix_hi(m);
    std::vector<std::size_t> suffix_who(m);
    double mn = kInf;
    std::size_t who = 0;
    for (std::size_t k = m; k-- > 0;) {
        const std::size_t idx = order[k];
        if (est.intervals[idx].hi < mn) {
            mn = est.intervals[idx].hi;
            who = idx;
        }
        suffix_hi[k] = mn;
        suffix_who[k] = who;
    }

    double best = 0.0;
    std::size_t best_witness = 0;
    double best_radius = 0.0;
    std::size_t annuli = 0;
    double prev_lo = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double lo_k = est.intervals[order[k]].lo;
        if (k > 0 && lo_k == est.intervals[order[k - 1]].lo) continue;
        // Radii in (prev_lo, lo_k] are certainly exceeded by every point in
        // the suffix; the binding radius of the piece is its lower end.
        const double r_lo = std::max(prev_lo, floor_r);
        prev_lo = lo_k;
        if (!(lo_k > r_lo)) continue;
        const double cand = suffix_hi[k] / r_lo;
        ++annuli;
        if (cand > best) {
            best = cand;
            best_witness = suffix_who[k];
            best_radius = r_lo;
        }
    }

    if (annuli == 0) {
        rep.extra["infinite"] = 1.0;
    } else {
        rep.absorb(best * (1.0 + kStrictPad), deformed.id_of(best_witness), "");
        rep.extra["floor"] = floor_r;
        rep.extra["witness_radius"] = best_radius;
        rep.extra["annuli_checked"] = static_cast<double>(annuli);
    }
    rep.pin_if_empty();
    return rep;
}

std::vector<ComparabilityReport> duality_report(const FiniteMetricMeasureSpace& space,
                                                double sigma, DualityDirection direction,
                                                unsigned threads) {
    ComparabilityReport met = make_report("duality-metric");
    ComparabilityReport mes = make_report("duality-measure");
    ComparabilityReport prod = make_report("duality-density-product");
    const RadiusWindow win = valid_annulus(space);

    std::vector<std::size_t> src_idx;
    std::vector<double> rho_first, rho_second, dtil, nutil;

    if (direction == DualityDirection::SphereThenFlatten) {
        const DeformedSpace s1 = sphericalize(space, sigma, TransformOptions{.threads = threads});
        const InfinityEstimates& est = *s1.infinity;
        const std::size_t m1 = s1.size();
        std::vector<double> mid(m1);
        for (std::size_t i = 0; i < m1; ++i)
            mid[i] = 0.5 * (est.intervals[i].lo + est.intervals[i].hi);

        // The second gauge is the distance to the virtual point, realized by
        // the interval midpoints; its ball lives at that point. Points whose
        // ball is certainly empty act like a dropped base and leave.
        std::vector<std::size_t> keep;
        std::vector<double> rho2;
        for (std::size_t i = 0; i < m1; ++i) {
            double ball = 0.0;
            for (std::size_t j = 0; j < m1; ++j)
                if (mid[j] < mid[i]) ball += s1.nuhat[j];
            if (!(ball > 0.0)) {
                ++prod.excluded;
                continue;
            }
            keep.push_back(i);
            rho2.push_back(1.0 / (mid[i] * std::pow(ball, 1.0 / sigma)));
        }
        if (keep.size() < 2)
            throw std::runtime_error(
                "duality: fewer than two points survive the second transform");
        const std::size_t k = keep.size();
        std::vector<double> sub(k * k);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b)
                sub[a * k + b] = s1.dhat_at(keep[a], keep[b]);
        dtil = chain_metric(sub, k, rho2, threads);
        src_idx.resize(k);
        rho_first.resize(k);
        nutil.resize(k);
        for (std::size_t a = 0; a < k; ++a) {
            src_idx[a] = s1.retained[keep[a]];
            rho_first[a] = s1.rho[keep[a]];
            nutil[a] = std::pow(rho2[a], sigma) * s1.nuhat[keep[a]];
        }
        rho_second = std::move(rho2);
    } else {
        // First leg is the m0 = 0 transform appropriate to the input: flatten
        // for bounded spaces, invert for unbounded truncations.
        const DeformedSpace f1 = space.unbounded_truncation()
                                     ? invert(space, sigma, TransformOptions{.threads = threads})
                                     : flatten(space, sigma, TransformOptions{.threads = threads});
        const FiniteMetricMeasureSpace flat = f1.as_space(natural_base(f1), true);
        const DeformedSpace s2 = sphericalize(flat, sigma, TransformOptions{.threads = threads});
        const std::size_t k = s2.size();
        src_idx.resize(k);
        rho_first.resize(k);
        rho_second.resize(k);
        nutil.resize(k);
        for (std::size_t a = 0; a < k; ++a) {
            const std::size_t f_local = s2.retained[a];
            src_idx[a] = f1.retained[f_local];
            rho_first[a] = f1.rho[f_local];
            rho_second[a] = s2.rho[a];
            nutil[a] = s2.nuhat[a];
        }
        dtil = s2.dhat;
    }

    const std::size_t count = src_idx.size();
    const auto inside = [&](std::size_t s) {
        const double r = space.radius_of(s);
        return r >= win.lo && r <= win.hi;
    };
    for (std::size_t a = 0; a < count; ++a) {
        if (!inside(src_idx[a])) {
            ++met.excluded;
            ++mes.excluded;
            ++prod.excluded;
            continue;
        }
        const std::string& ida = space.id_of(src_idx[a]);
        prod.absorb(rho_first[a] * rho_second[a], ida, "");
        if (space.mass(src_idx[a]) > 0.0)
            mes.absorb(nutil[a] / space.mass(src_idx[a]), ida, "");
        else
            ++mes.excluded;
        for (std::size_t b = a + 1; b < count; ++b) {
            if (!inside(src_idx[b])) continue;
            met.absorb(dtil[a * count + b] / space.distance(src_idx[a], src_idx[b]), ida,
                       space.id_of(src_idx[b]));
        }
    }
    for (ComparabilityReport* r : {&met, &mes, &prod}) r->pin_if_empty();
    return {met, mes, prod};
}

std::vector<ComparabilityReport> check_sandwich_and_bounds(
    const FiniteMetricMeasureSpace& space, const DeformedSpace& deformed) {
    ComparabilityReport low = make_report("sandwich-lower");
    ComparabilityReport upp = make_report("sandwich-upper");
    ComparabilityReport radial = make_report("radial-lower-bound");
    ComparabilityReport chain = make_report("chain-upper-bound");
    ComparabilityReport sep = make_report("separation-lower");
    ComparabilityReport comp = make_report("comparable-regime");
    ComparabilityReport inner = make_report("ball-shape-inner");
    ComparabilityReport outer = make_report("ball-shape-outer");
    ComparabilityReport near = make_report("near-implies-comparable");
    ComparabilityReport toinf = make_report("distance-to-infinity");
    for (ComparabilityReport* r : {&low, &upp, &radial, &chain, &inner, &outer, &toinf})
        r->extra["violations"] = 0.0;

    const std::size_t m = deformed.size();
    const std::size_t n = space.size();
    std::vector<double> source_rho(n, kInf);
    for (std::size_t k = 0; k < m; ++k) source_rho[deformed.retained[k]] = deformed.rho[k];

    const auto view = canonical_view(deformed);
    std::optional<ConstantsLedger> led;
    if (view) led = certify_constants(deformed);
    const RadiusWindow win = valid_annulus(space);
    const auto inside = [&](std::size_t i) {
        const double r = deformed.source_radius(i);
        return r <= win.hi && (view->m0 == 1 || r >= win.lo);
    };
    const bool chain_applicable = view && deformed.kappa_finite;
    const double kappa = deformed.kappa;
    const double chain_const =
        chain_applicable ? 8.0 * kappa * kappa * kappa / (kappa - 1.0) : 0.0;

    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t si = deformed.retained[i];
        const RowView src_row(&space.distance_matrix()[si * n], space.masses().data(),
                              source_rho.data(), n);
        const double ri = deformed.source_radius(i);
        for (std::size_t j = 0; j < m; ++j) {
            if (j == i) continue;
            const std::size_t sj = deformed.retained[j];
            const double dist = space.distance(si, sj);
            const double dh = deformed.dhat_at(i, j);
            const double rj = deformed.source_radius(j);

            const double rho_min = src_row.min_below(dist);
            const double low_ratio = dh / (rho_min * dist);
            low.absorb(low_ratio, deformed.id_of(i), deformed.id_of(j));
            if (low_ratio < 1.0 - kRelSlack) low.extra["violations"] += 1.0;

            if (i < j) {
                const double upp_ratio = dh / ((deformed.rho[i] + deformed.rho[j]) * dist);
                upp.absorb(upp_ratio, deformed.id_of(i), deformed.id_of(j));
                if (upp_ratio > 1.0 + kRelSlack) upp.extra["violations"] += 1.0;
            }

            if (ri < rj) {
                const double integral = deformed.density.integral(ri, rj);
                const double ratio = dh / integral;
                radial.absorb(ratio, deformed.id_of(i), deformed.id_of(j));
                if (ratio < 1.0 - kRelSlack) radial.extra["violations"] += 1.0;
            } else if (ri == rj && i < j) {
                ++radial.excluded;
            }

            if (chain_applicable && (ri < rj || (ri == rj && i < j))) {
                if (ri >= view->m0) {
                    const double integral = deformed.density.integral(ri / kappa, rj);
                    const double ratio = dh / (chain_const * integral);
                    chain.absorb(ratio, deformed.id_of(i), deformed.id_of(j));
                    if (ratio > 1.0 + kRelSlack) chain.extra["violations"] += 1.0;
                } else {
                    ++chain.excluded;
                }
            }

            if (view) {
                if (!inside(i) || !inside(j)) {
                    if (i < j) {
                        ++sep.excluded;
                        ++comp.excluded;
                        ++near.excluded;
                    }
                    continue;
                }
                const double gi = view->gauge[i];
                const double gj = view->gauge[j];
                if (gj >= 2.0 * gi)
                    sep.absorb(dh / view->scale[i], deformed.id_of(i), deformed.id_of(j));
                if (i < j && std::max(gi, gj) < 2.0 * std::min(gi, gj)) {
                    const std::size_t small_end = (gi <= gj) ? i : j;
                    comp.absorb(dh / (deformed.rho[small_end] * dist), deformed.id_of(i),
                                deformed.id_of(j));
                }
                if (dh <= led->C2.value * view->scale[i])
                    near.absorb(gi / gj, deformed.id_of(i), deformed.id_of(j));
            }
        }
    }

    if (view) {
        for (std::size_t i = 0; i < m; ++i) {
            if (!inside(i)) {
                ++inner.excluded;
                ++outer.excluded;
                continue;
            }
            const std::size_t si = deformed.retained[i];
            const double cap = led->c0.value * view->scale[i];
            for (const double f : {0.5, 1.0}) {
                const double r = f * cap;
                if (!(r > 0.0)) {
                    ++inner.excluded;
                    ++outer.excluded;
                    continue;
                }
                double in_max = 0.0;
                bool has_member = false;
                double out_min = kInf;
                for (std::size_t j = 0; j < m; ++j) {
                    if (j == i) continue;
                    const double cost =
                        deformed.rho[i] * space.distance(si, deformed.retained[j]) / r;
                    if (deformed.dhat_at(i, j) < r) {
                        in_max = std::max(in_max, cost);
                        has_member = true;
                    } else {
                        out_min = std::min(out_min, cost);
                    }
                }
                if (has_member) {
                    const double ratio = in_max / led->a2.value;
                    outer.absorb(ratio, deformed.id_of(i), fmt_g(r));
                    if (ratio >= 1.0) outer.extra["violations"] += 1.0;
                } else {
                    ++outer.excluded;
                }
                if (std::isfinite(out_min)) {
                    const double ratio = out_min / led->a1.value;
                    inner.absorb(ratio, deformed.id_of(i), fmt_g(r));
                    if (ratio < 1.0 - 1e-12) inner.extra["violations"] += 1.0;
                } else {
                    ++inner.excluded;
                }
            }
        }
    } else {
        for (ComparabilityReport* r : {&sep, &comp, &inner, &outer, &near})
            mark_not_applicable(*r);
    }
    if (!chain_applicable) mark_not_applicable(chain);

    if (view && view->m0 == 1) {
        const InfinityEstimates est =
            deformed.infinity ? *deformed.infinity : infinity_estimates(deformed);
        for (std::size_t i = 0; i < m; ++i) {
            if (deformed.source_radius(i) > win.hi) {
                ++toinf.excluded;
                continue;
            }
            const double inv_scale = 1.0 / view->scale[i];
            toinf.absorb(est.intervals[i].lo * inv_scale, deformed.id_of(i), "L");
            toinf.absorb(est.intervals[i].hi * inv_scale, deformed.id_of(i), "U");
            if (est.intervals[i].lo > est.intervals[i].hi * (1.0 + kRelSlack))
                toinf.extra["violations"] += 1.0;
        }
    } else {
        mark_not_applicable(toinf);
    }

    std::vector<ComparabilityReport> out{low,  upp,   radial, chain, sep,
                                         comp, inner, outer,  near,  toinf};
    for (ComparabilityReport& r : out) r.pin_if_empty();
    return out;
}

}  // namespace metricdeform
