#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "metricdeform/deform.hpp"
#include "metricdeform/numeric.hpp"

namespace metricdeform {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string pair_witness(const DeformedSpace& d, std::size_t i, std::size_t j) {
    return d.id_of(i) + "," + d.id_of(j);
}

std::string radius_witness(const DeformedSpace& d, std::size_t i, double r) {
    std::ostringstream os;
    os << d.id_of(i) << " @ r=" << r;
    return os.str();
}

}  // namespace

ConstantsLedger certify_constants(const DeformedSpace& d) {
    return certify_constants(d, valid_annulus(d.source));
}

ConstantsLedger certify_constants(const DeformedSpace& d, const RadiusWindow& window) {
    if (d.density.kind() != DensityKind::Canonical)
        throw std::logic_error("certify_constants: canonical deformations only");
    const int m0 = d.density.m0();
    const double sigma = d.sigma;
    const std::size_t n = d.size();
    const BallProfile& profile = d.source.base_profile();

    ConstantsLedger led;
    led.window = window;

    std::vector<double> gauge(n), ball(n), scale(n);
    std::vector<char> inside(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double r = d.source_radius(i);
        gauge[i] = r + m0;
        ball[i] = profile.mass_below(gauge[i]);
        scale[i] = std::pow(ball[i], -1.0 / sigma);  // nu(B_m(x))^{-1/sigma}
        inside[i] = (r <= window.hi) && (m0 == 1 || r >= window.lo);
    }

    led.c1_comp.value = kInf;
    led.c2.value = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (!inside[i] || !inside[j]) {
                ++led.excluded_pairs;
                continue;
            }
            const std::size_t small = (gauge[i] <= gauge[j]) ? i : j;
            const std::size_t large = (small == i) ? j : i;
            const double dh = d.dhat_at(i, j);
            if (gauge[large] >= 2.0 * gauge[small]) {
                const double v = dh / scale[small];
                led.has_separated_pairs = true;
                if (v < led.c2.value) {
                    led.c2.value = v;
                    led.c2.witness = pair_witness(d, small, large);
                }
                if (v > led.C2.value) {
                    led.C2.value = v;
                    led.C2.witness = pair_witness(d, small, large);
                }
                ++led.c2.samples;
                ++led.C2.samples;
            } else {
                const double v = dh / (d.rho[small] * d.source.distance(d.retained[i], d.retained[j]));
                led.has_comparable_pairs = true;
                if (v < led.c1_comp.value) {
                    led.c1_comp.value = v;
                    led.c1_comp.witness = pair_witness(d, small, large);
                }
                if (v > led.C1_comp.value) {
                    led.C1_comp.value = v;
                    led.C1_comp.witness = pair_witness(d, small, large);
                }
                ++led.c1_comp.samples;
                ++led.C1_comp.samples;
            }
        }
    }
    if (!led.has_comparable_pairs) {
        led.c1_comp.value = 1.0;
        led.C1_comp.value = 1.0;
    }
    if (!led.has_separated_pairs) {
        led.c2.value = 1.0;
        led.C2.value = 1.0;
    }

    // c0: largest radius scale below which a deformed ball can only contain
    // gauge-comparable points, measured against every incomparable neighbor
    // (in or out of the window; the ball does not stop at the window).
    double c0 = kInf;
    for (std::size_t i = 0; i < n; ++i) {
        if (!inside[i]) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double lo_m = std::min(gauge[i], gauge[j]);
            const double hi_m = std::max(gauge[i], gauge[j]);
            if (hi_m < 2.0 * lo_m) continue;
            const double v = d.dhat_at(i, j) / scale[i];
            if (v < c0) {
                c0 = v;
                led.c0.witness = pair_witness(d, i, j);
            }
            ++led.c0.samples;
        }
    }
    led.c0.value = (led.c0.samples > 0) ? 0.9 * c0 : 1.0;

    // Shape constants of small deformed balls, via the per-pair extremes of
    // rho(x) d(x,y) / dhat(x,y). For a member y of Bhat(x,r) the worst radius
    // is r just above dhat(x,y); for an excluded y it is r = min(dhat, cap).
    // This certifies both inclusions for every radius up to the cap at once.
    double a2 = 0.0, a1 = kInf;
    double rho_lo = 1.0, rho_hi = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        if (!inside[i]) continue;
        const double r_cap = led.c0.value * scale[i];
        if (!(r_cap > 0.0)) continue;
        for (std::size_t j = 0; j < n; ++j) {
            if (j == i) continue;
            const double dh = d.dhat_at(i, j);
            const double cost = d.rho[i] * d.source.distance(d.retained[i], d.retained[j]);
            if (dh < r_cap) {
                const double v = cost / dh;
                if (v > a2) {
                    a2 = v;
                    led.a2.witness = radius_witness(d, i, dh);
                }
                const double q = d.rho[j] / d.rho[i];
                rho_lo = std::min(rho_lo, q);
                rho_hi = std::max(rho_hi, q);
            }
            const double v = cost / std::min(dh, r_cap);
            if (v < a1) {
                a1 = v;
                led.a1.witness = radius_witness(d, i, std::min(dh, r_cap));
            }
            ++led.a1.samples;
            ++led.a2.samples;
        }
    }
    led.a2.value = (a2 > 0.0) ? a2 * (1.0 + kStrictPad) : 1.0;
    led.a1.value = std::min(std::isfinite(a1) ? a1 : led.a2.value, led.a2.value);
    led.small_ball_rho_lo = rho_lo;
    led.small_ball_rho_hi = rho_hi;

    const double c_nu = doubling_constant(d.source, RadiiPolicy::All).constant;
    led.c_prime = std::max({1.0, led.C2.value * std::pow(c_nu, 1.0 / sigma),
                            3.0 * led.C1_comp.value});
    return led;
}

}  // namespace metricdeform
