#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace ordembed {

// Fixed-chunk reductions. The chunk layout depends only on the element count,
// never on the thread count: each chunk is summed serially by one worker and
// the chunk partials are combined in index order. Output bits are therefore
// identical for any number of threads, and the serial twins reproduce the
// parallel results exactly.

inline constexpr std::size_t kReduceChunk = 1024;

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

template <class F>
double chunked_sum_serial(std::size_t count, F&& term) {
    const std::size_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, 0.0);
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = lo + kReduceChunk < count ? lo + kReduceChunk : count;
        double s = 0.0;
        for (std::size_t t = lo; t < hi; ++t) s += term(t);
        partial[c] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

template <class F>
double chunked_sum(std::size_t count, F&& term) {
    const std::size_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
    std::vector<double> partial(nchunks, 0.0);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
        const std::size_t c = static_cast<std::size_t>(ci);
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = lo + kReduceChunk < count ? lo + kReduceChunk : count;
        double s = 0.0;
        for (std::size_t t = lo; t < hi; ++t) s += term(t);
        partial[c] = s;
    }
    double total = 0.0;
    for (double p : partial) total += p;
    return total;
}

// Argmin with deterministic tie-breaking (lowest index wins), chunked the same way.
struct MinWitness {
    double value;
    std::size_t index;
};

template <class F>
MinWitness chunked_min_serial(std::size_t count, F&& value_at) {
    const std::size_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
    std::vector<MinWitness> partial(nchunks);
    for (std::size_t c = 0; c < nchunks; ++c) {
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = lo + kReduceChunk < count ? lo + kReduceChunk : count;
        MinWitness best{std::numeric_limits<double>::infinity(), count};
        for (std::size_t t = lo; t < hi; ++t) {
            const double v = value_at(t);
            if (v < best.value) best = {v, t};
        }
        partial[c] = best;
    }
    MinWitness best{std::numeric_limits<double>::infinity(), count};
    for (const auto& p : partial)
        if (p.value < best.value) best = p;
    return best;
}

template <class F>
MinWitness chunked_min(std::size_t count, F&& value_at) {
    const std::size_t nchunks = (count + kReduceChunk - 1) / kReduceChunk;
    std::vector<MinWitness> partial(nchunks);
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long long ci = 0; ci < static_cast<long long>(nchunks); ++ci) {
        const std::size_t c = static_cast<std::size_t>(ci);
        const std::size_t lo = c * kReduceChunk;
        const std::size_t hi = lo + kReduceChunk < count ? lo + kReduceChunk : count;
        MinWitness best{std::numeric_limits<double>::infinity(), count};
        for (std::size_t t = lo; t < hi; ++t) {
            const double v = value_at(t);
            if (v < best.value) best = {v, t};
        }
        partial[c] = best;
    }
    MinWitness best{std::numeric_limits<double>::infinity(), count};
    for (const auto& p : partial)
        if (p.value < best.value) best = p;
    return best;
}

}  // namespace ordembed
