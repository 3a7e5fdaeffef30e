#include "metricdeform/space.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace metricdeform {

const char* validation_kind_name(ValidationKind k) {
    switch (k) {
        case ValidationKind::TooFewPoints: return "TooFewPoints";
        case ValidationKind::NonSymmetric: return "NonSymmetric";
        case ValidationKind::ZeroDistanceDistinctPoints: return "ZeroDistanceDistinctPoints";
        case ValidationKind::TriangleViolation: return "TriangleViolation";
        case ValidationKind::NegativeMass: return "NegativeMass";
        case ValidationKind::NotFinite: return "NotFinite";
    }
    return "Unknown";
}

std::string SpaceValidationError::summarize(const std::vector<ValidationIssue>& issues) {
    std::ostringstream os;
    os << "space validation failed (" << issues.size() << " issue";
    if (issues.size() != 1) os << 's';
    os << ')';
    for (const auto& is : issues) os << "; " << validation_kind_name(is.kind) << ": " << is.detail;
    return os.str();
}

SpaceValidationError::SpaceValidationError(std::vector<ValidationIssue> issues)
    : std::runtime_error(summarize(issues)), issues_(std::move(issues)) {}

BallProfile::BallProfile(std::vector<double> radii, std::vector<double> cumulative)
    : radii_(std::move(radii)), cum_(std::move(cumulative)) {}

double BallProfile::mass_below(double r) const {
    // Largest k with radii_[k] < r; the open ball collects exactly those shells.
    auto it = std::lower_bound(radii_.begin(), radii_.end(), r);
    if (it == radii_.begin()) return 0.0;
    return cum_[static_cast<std::size_t>(it - radii_.begin()) - 1];
}

std::optional<std::size_t> FiniteMetricMeasureSpace::index_of(const std::string& id) const {
    for (std::size_t i = 0; i < n_; ++i)
        if (ids_[i] == id) return i;
    return std::nullopt;
}

double FiniteMetricMeasureSpace::ball_mass(std::size_t center, double radius) const {
    double sum = 0.0;
    const double* row = dist_.data() + center * n_;
    for (std::size_t i = 0; i < n_; ++i)
        if (row[i] < radius) sum += mass_[i];
    return sum;
}

BallQueryResult FiniteMetricMeasureSpace::ball(std::size_t center, double radius) const {
    BallQueryResult out;
    out.center = center;
    out.radius = radius;
    const double* row = dist_.data() + center * n_;
    for (std::size_t i = 0; i < n_; ++i) {
        if (row[i] < radius) {
            out.members.push_back(i);
            out.mass += mass_[i];
        }
    }
    return out;
}

std::vector<double> FiniteMetricMeasureSpace::critical_radii(std::size_t center) const {
    std::vector<double> vals(dist_.begin() + static_cast<std::ptrdiff_t>(center * n_),
                             dist_.begin() + static_cast<std::ptrdiff_t>((center + 1) * n_));
    std::sort(vals.begin(), vals.end());
    vals.erase(std::unique(vals.begin(), vals.end()), vals.end());
    return vals;
}

void FiniteMetricMeasureSpace::finalize() {
    max_radius_ = 0.0;
    for (std::size_t i = 0; i < n_; ++i) max_radius_ = std::max(max_radius_, radius_of(i));

    total_mass_ = 0.0;
    for (double m : mass_) total_mass_ += m;

    min_positive_distance_ = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < n_; ++i)
        for (std::size_t j = i + 1; j < n_; ++j)
            min_positive_distance_ = std::min(min_positive_distance_, distance(i, j));

    // Base profile thresholds reuse ball_mass so that every consumer sees the
    // identical index-order accumulation.
    std::vector<double> radii = critical_radii(base_);
    std::vector<double> cum(radii.size());
    for (std::size_t k = 0; k < radii.size(); ++k) {
        double probe = (k + 1 < radii.size()) ? (radii[k] + radii[k + 1]) / 2.0
                                              : radii[k] + 1.0;
        cum[k] = ball_mass(base_, probe);
    }
    base_profile_ = BallProfile(std::move(radii), std::move(cum));
}

FiniteMetricMeasureSpace build_space(std::vector<std::string> ids,
                                     std::vector<double> distances,
                                     std::vector<double> masses,
                                     std::size_t base_index,
                                     bool unbounded_truncation) {
    std::vector<ValidationIssue> issues;
    const std::size_t n = ids.size();

    if (n < 2) {
        issues.push_back({ValidationKind::TooFewPoints,
                          "need at least 2 points, got " + std::to_string(n)});
        throw SpaceValidationError(std::move(issues));
    }
    if (distances.size() != n * n)
        issues.push_back({ValidationKind::NotFinite,
                          "distance matrix must be " + std::to_string(n) + "x" + std::to_string(n)});
    if (masses.size() != n)
        issues.push_back({ValidationKind::NotFinite, "mass vector length mismatch"});
    if (base_index >= n)
        issues.push_back({ValidationKind::NotFinite, "base index out of range"});
    if (!issues.empty()) throw SpaceValidationError(std::move(issues));

    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            if (!std::isfinite(distances[i * n + j]) || !std::isfinite(distances[j * n + i])) {
                issues.push_back({ValidationKind::NotFinite,
                                  "non-finite distance at (" + std::to_string(i) + "," +
                                      std::to_string(j) + ")",
                                  i, j, 0});
                throw SpaceValidationError(std::move(issues));
            }

    for (std::size_t i = 0; i < n; ++i) {
        if (distances[i * n + i] != 0.0) {
            issues.push_back({ValidationKind::ZeroDistanceDistinctPoints,
                              "nonzero diagonal at " + std::to_string(i), i, i, 0});
            break;
        }
    }

    bool symmetric = true;
    for (std::size_t i = 0; i < n && symmetric; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distances[i * n + j] != distances[j * n + i]) {
                issues.push_back({ValidationKind::NonSymmetric,
                                  "d(" + std::to_string(i) + "," + std::to_string(j) +
                                      ") != d(" + std::to_string(j) + "," + std::to_string(i) + ")",
                                  i, j, 0});
                symmetric = false;
                break;
            }
        }
    }

    bool positive = true;
    for (std::size_t i = 0; i < n && positive; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            if (distances[i * n + j] <= 0.0) {
                issues.push_back({ValidationKind::ZeroDistanceDistinctPoints,
                                  "d(" + std::to_string(i) + "," + std::to_string(j) +
                                      ") = " + std::to_string(distances[i * n + j]),
                                  i, j, 0});
                positive = false;
                break;
            }
        }
    }

    if (symmetric) {
        // Track the worst relative defect d(i,j) - d(i,k) - d(k,j) over all triples.
        double worst = 0.0;
        std::size_t wi = 0, wj = 0, wk = 0;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                const double dij = distances[i * n + j];
                for (std::size_t k = 0; k < n; ++k) {
                    if (k == i || k == j) continue;
                    const double via = distances[i * n + k] + distances[k * n + j];
                    const double largest = std::max(dij, std::max(distances[i * n + k],
                                                                  distances[k * n + j]));
                    const double defect = (dij - via) / largest;
                    if (defect > worst) {
                        worst = defect;
                        wi = i; wj = j; wk = k;
                    }
                }
            }
        }
        if (worst > kTriangleRelTol) {
            std::ostringstream os;
            os << "worst triple (" << wi << "," << wj << " via " << wk
               << ") relative defect " << worst;
            issues.push_back({ValidationKind::TriangleViolation, os.str(), wi, wj, wk});
        }
    }

    for (std::size_t i = 0; i < n; ++i) {
        if (!std::isfinite(masses[i]) || masses[i] < 0.0) {
            issues.push_back({ValidationKind::NegativeMass,
                              "mass(" + std::to_string(i) + ") = " + std::to_string(masses[i]),
                              i, i, 0});
        } else if (masses[i] == 0.0 && i != base_index) {
            issues.push_back({ValidationKind::NegativeMass,
                              "mass(" + std::to_string(i) +
                                  ") = 0 is only allowed at the base point",
                              i, i, 0});
        }
    }

    if (!issues.empty()) throw SpaceValidationError(std::move(issues));

    FiniteMetricMeasureSpace s;
    s.n_ = n;
    s.ids_ = std::move(ids);
    s.dist_ = std::move(distances);
    s.mass_ = std::move(masses);
    s.base_ = base_index;
    s.unbounded_truncation_ = unbounded_truncation;
    s.finalize();
    return s;
}

}  // namespace metricdeform
