#include "metricdeform/numeric.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

namespace metricdeform {

unsigned resolve_thread_count(unsigned requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("METRICDEFORM_THREADS")) {
        char* end = nullptr;
        long v = std::strtol(env, &end, 10);
        if (end != env && v > 0) return static_cast<unsigned>(std::min(v, 256L));
    }
    return 1;
}

void parallel_chunks(std::size_t count, unsigned threads,
                     const std::function<void(std::size_t, std::size_t)>& fn) {
    if (count == 0) return;
    threads = std::max(1u, threads);
    if (threads == 1 || count < 2 * threads) {
        fn(0, count);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(threads);
    const std::size_t chunk = (count + threads - 1) / threads;
    for (unsigned t = 0; t < threads; ++t) {
        const std::size_t lo = static_cast<std::size_t>(t) * chunk;
        if (lo >= count) break;
        const std::size_t hi = std::min(count, lo + chunk);
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& th : pool) th.join();
}

std::vector<double> with_midpoints(const std::vector<double>& sorted) {
    std::vector<double> out;
    out.reserve(sorted.size() * 2);
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        out.push_back(sorted[i]);
        if (i + 1 < sorted.size()) out.push_back((sorted[i] + sorted[i + 1]) / 2.0);
    }
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

}  // namespace metricdeform
