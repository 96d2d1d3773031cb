#ifndef M2C_PARALLEL_HPP
#define M2C_PARALLEL_HPP

#include <algorithm>
#include <cstddef>
#include <thread>
#include <vector>

namespace m2c {

inline unsigned default_thread_count() {
    unsigned n = std::thread::hardware_concurrency();
    return n == 0 ? 1u : n;
}

// Runs fn(begin, end) over disjoint contiguous chunks of [0, n).
// Chunk boundaries depend only on n and the thread count, so callers that
// merge per-chunk results with an order-independent reduction get identical
// output for any thread count.
template <typename Fn>
void parallel_chunks(std::size_t n, unsigned threads, Fn&& fn) {
    if (n == 0) return;
    unsigned workers = std::max(1u, threads);
    std::size_t chunk = (n + workers - 1) / workers;
    if (workers == 1 || n < 2048) {
        fn(std::size_t{0}, n);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t begin = std::min(n, w * chunk);
        std::size_t end = std::min(n, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

} // namespace m2c

#endif
