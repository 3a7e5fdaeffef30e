#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace metricdeform {

// Relative tolerance for triangle-inequality validation, measured against the
// largest side of the triple.
inline constexpr double kTriangleRelTol = 1e-12;

// A scalar function on the points of a space, indexed like the point list.
using ScalarField = std::vector<double>;

struct BallQueryResult {
    std::size_t center = 0;
    double radius = 0.0;
    std::vector<std::size_t> members;  // indices with d(center, .) < radius, ascending
    double mass = 0.0;                 // sum of member masses, index order
};

enum class ValidationKind {
    TooFewPoints,
    NonSymmetric,
    ZeroDistanceDistinctPoints,
    TriangleViolation,
    NegativeMass,
    NotFinite,
};

const char* validation_kind_name(ValidationKind k);

struct ValidationIssue {
    ValidationKind kind;
    std::string detail;
    // Worst offending triple for triangle violations, (i, j, unused) otherwise.
    std::size_t i = 0, j = 0, k = 0;
};

class SpaceValidationError : public std::runtime_error {
public:
    explicit SpaceValidationError(std::vector<ValidationIssue> issues);
    const std::vector<ValidationIssue>& issues() const noexcept { return issues_; }

private:
    static std::string summarize(const std::vector<ValidationIssue>& issues);
    std::vector<ValidationIssue> issues_;
};

// Left-continuous step profile r -> nu(B(base, r)) over the critical radii of
// the base point. Shared by the canonical density, measure_inverse and the
// tail-mass checks; all mass sums go through the same index-order accumulation
// as ball queries so that comparisons against ball masses are exact.
class BallProfile {
public:
    BallProfile() = default;
    BallProfile(std::vector<double> radii, std::vector<double> cumulative);

    // nu(B(base, r)) with the open-ball convention.
    double mass_below(double r) const;
    const std::vector<double>& radii() const noexcept { return radii_; }
    const std::vector<double>& cumulative() const noexcept { return cum_; }
    double total() const { return cum_.empty() ? 0.0 : cum_.back(); }

private:
    std::vector<double> radii_;  // distinct critical radii, radii_[0] == 0
    std::vector<double> cum_;    // cum_[k] = mass of { y : |y| <= radii_[k] }
};

// Finite metric measure space (Z, d, nu) with a distinguished base point.
// Distances are held as an exact symmetric matrix; |x| denotes d(x, base).
class FiniteMetricMeasureSpace {
public:
    std::size_t size() const noexcept { return n_; }
    const std::vector<std::string>& ids() const noexcept { return ids_; }
    const std::string& id_of(std::size_t i) const { return ids_.at(i); }
    std::optional<std::size_t> index_of(const std::string& id) const;

    double distance(std::size_t i, std::size_t j) const { return dist_[i * n_ + j]; }
    const std::vector<double>& distance_matrix() const noexcept { return dist_; }
    double mass(std::size_t i) const { return mass_[i]; }
    const std::vector<double>& masses() const noexcept { return mass_; }
    std::size_t base() const noexcept { return base_; }
    bool unbounded_truncation() const noexcept { return unbounded_truncation_; }

    // d(i, base); R_inf = max over points.
    double radius_of(std::size_t i) const { return dist_[i * n_ + base_]; }
    double max_radius() const noexcept { return max_radius_; }
    double total_mass() const noexcept { return total_mass_; }
    // Smallest positive pairwise distance; the resolution floor of the space.
    double min_positive_distance() const noexcept { return min_positive_distance_; }

    BallQueryResult ball(std::size_t center, double radius) const;
    // Mass of the open ball without materializing members. Index-order sum.
    double ball_mass(std::size_t center, double radius) const;
    // Sorted distinct values of d(center, .), always starting at 0.
    std::vector<double> critical_radii(std::size_t center) const;

    // Profile of base-centered ball masses.
    const BallProfile& base_profile() const noexcept { return base_profile_; }

    friend FiniteMetricMeasureSpace build_space(std::vector<std::string> ids,
                                                std::vector<double> distances,
                                                std::vector<double> masses,
                                                std::size_t base_index,
                                                bool unbounded_truncation);

private:
    FiniteMetricMeasureSpace() = default;
    void finalize();

    std::size_t n_ = 0;
    std::vector<std::string> ids_;
    std::vector<double> dist_;  // row-major n x n
    std::vector<double> mass_;
    std::size_t base_ = 0;
    bool unbounded_truncation_ = false;

    double max_radius_ = 0.0;
    double total_mass_ = 0.0;
    double min_positive_distance_ = 0.0;
    BallProfile base_profile_;
};

// Validates and assembles a space. Throws SpaceValidationError carrying every
// violated axiom; for triangle violations the worst offending triple (largest
// relative defect) is reported. mass(base) == 0 is legal and marks a space
// punctured at the base; all other masses must be strictly positive.
FiniteMetricMeasureSpace build_space(std::vector<std::string> ids,
                                     std::vector<double> distances,
                                     std::vector<double> masses,
                                     std::size_t base_index,
                                     bool unbounded_truncation = false);

}  // namespace metricdeform
