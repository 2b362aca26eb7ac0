#pragma once

#include <cstdint>
#include <cstdlib>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace covertcast {

// Every kernel runs under either policy and produces bit-identical results:
// work units are indexed, RNG streams are keyed by index, and floating-point
// reductions use a fixed chunk decomposition independent of thread count.
enum class Exec { serial, parallel };

// Thread budget: OpenMP's max, optionally capped by COVERTCAST_THREADS.
inline int max_threads() {
    static const int cached = [] {
        int n = 1;
#ifdef _OPENMP
        n = omp_get_max_threads();
#endif
        if (const char* env = std::getenv("COVERTCAST_THREADS")) {
            const int cap = std::atoi(env);
            if (cap > 0 && cap < n) n = cap;
        }
        return n;
    }();
    return cached;
}

template <class F>
void parallel_for(std::int64_t count, Exec exec, F&& body) {
    if (exec == Exec::serial || max_threads() == 1) {
        for (std::int64_t i = 0; i < count; ++i) body(i);
        return;
    }
#ifdef _OPENMP
#pragma omp parallel for schedule(static) num_threads(max_threads())
#endif
    for (std::int64_t i = 0; i < count; ++i) body(i);
}

// Deterministic parallel sum: fixed chunk boundaries, serial in-chunk order,
// serial reduction over chunk partials.
template <class F>
double sum_chunked(std::int64_t count, Exec exec, F&& term) {
    if (count <= 0) return 0.0;
    const std::int64_t chunks = count < 1024 ? count : 1024;
    std::vector<double> partial(static_cast<std::size_t>(chunks), 0.0);
    parallel_for(chunks, exec, [&](std::int64_t c) {
        const std::int64_t lo = count * c / chunks;
        const std::int64_t hi = count * (c + 1) / chunks;
        double s = 0.0;
        for (std::int64_t i = lo; i < hi; ++i) s += term(i);
        partial[static_cast<std::size_t>(c)] = s;
    });
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

}  // namespace covertcast
