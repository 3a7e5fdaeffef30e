#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace metricdeform {

// Neumaier-compensated accumulator. Summation order is fixed by the caller,
// which together with the compensation keeps reported totals bit-stable
// across runs and thread counts.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

inline std::uint64_t fnv1a64(const void* data, std::size_t len, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    const auto* p = static_cast<const unsigned char*>(data);
    std::uint64_t h = seed;
    for (std::size_t i = 0; i < len; ++i) {
        h ^= p[i];
        h *= 0x100000001b3ULL;
    }
    return h;
}

inline std::uint64_t fnv1a64(const std::string& s, std::uint64_t seed = 0xcbf29ce484222325ULL) {
    return fnv1a64(s.data(), s.size(), seed);
}

// Worker count resolution: explicit request wins, then METRICDEFORM_THREADS,
// then 1. All parallel loops in this library partition work identically for
// every thread count, so results never depend on the value.
unsigned resolve_thread_count(unsigned requested = 0);

// Runs fn(begin, end) over [0, count) split into contiguous chunks, one per
// worker. Deterministic partition; falls back to inline execution for small
// counts or a single worker.
void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn);

// Inserts the midpoints of consecutive entries into a sorted, distinct grid.
// Used wherever a supremum over a step function of the radius is required.
std::vector<double> with_midpoints(const std::vector<double>& sorted);

}  // namespace metricdeform
