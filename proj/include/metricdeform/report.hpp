#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <map>
#include <string>

namespace metricdeform {

// Min/max ratio tracker for one checked statement, with witness pairs and
// optional per-case tallies.
struct ComparabilityReport {
    std::string statement;
    double min_ratio = std::numeric_limits<double>::infinity();
    double max_ratio = -std::numeric_limits<double>::infinity();
    std::array<std::string, 2> witness_min{};
    std::array<std::string, 2> witness_max{};
    std::map<std::string, std::size_t> cases;
    std::size_t excluded = 0;
    bool degenerate = false;  // no informative pairs; ratios pinned to 1
    std::map<std::string, double> extra;

    bool empty() const { return min_ratio > max_ratio; }

    void absorb(double ratio, const std::string& x, const std::string& y) {
        if (ratio < min_ratio) {
            min_ratio = ratio;
            witness_min = {x, y};
        }
        if (ratio > max_ratio) {
            max_ratio = ratio;
            witness_max = {x, y};
        }
    }

    void pin_if_empty() {
        if (empty()) {
            min_ratio = 1.0;
            max_ratio = 1.0;
            degenerate = true;
        }
    }

    double spread() const { return empty() ? 1.0 : max_ratio / min_ratio; }
};

}  // namespace metricdeform
