#pragma once

// Ordered first-hit scans. The parallel path splits the range into chunks,
// lets every thread stop at its first hit, and keeps the minimum index, so the
// answer is identical to the serial loop for any thread count.

#include <algorithm>
#include <cstdint>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace fpr {

enum class Exec { Serial, Parallel };

inline int max_threads() {
#ifdef _OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

inline void set_threads(int n) {
#ifdef _OPENMP
    if (n > 0) omp_set_num_threads(n);
#else
    (void)n;
#endif
}

/// Smallest i in [lo, hi) with pred(i), or hi when there is none.
template <class Pred>
std::int64_t first_hit_serial(std::int64_t lo, std::int64_t hi, Pred&& pred) {
    for (std::int64_t i = lo; i < hi; ++i)
        if (pred(i)) return i;
    return hi;
}

template <class Pred>
std::int64_t first_hit_parallel(std::int64_t lo, std::int64_t hi, Pred&& pred) {
    constexpr std::int64_t chunk = 4096;
    const std::int64_t block = chunk * 8 * std::max(1, max_threads());
    for (std::int64_t base = lo; base < hi; base += block) {
        const std::int64_t end = std::min(hi, base + block);
        const std::int64_t nchunks = (end - base + chunk - 1) / chunk;
        std::int64_t best = end;
#pragma omp parallel for schedule(dynamic, 1) reduction(min : best)
        for (std::int64_t c = 0; c < nchunks; ++c) {
            const std::int64_t s = base + c * chunk;
            const std::int64_t e = std::min(end, s + chunk);
            if (s >= best) continue;
            for (std::int64_t i = s; i < e; ++i) {
                if (pred(i)) {
                    best = std::min(best, i);
                    break;
                }
            }
        }
        if (best < end) return best;
    }
    return hi;
}

template <class Pred>
std::int64_t first_hit(std::int64_t lo, std::int64_t hi, Pred&& pred, Exec exec) {
    return exec == Exec::Parallel ? first_hit_parallel(lo, hi, pred) : first_hit_serial(lo, hi, pred);
}

}  // namespace fpr
