#pragma once

#include <cstddef>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace bfcs {

// Worker count resolution: explicit request > BFCS_THREADS > hardware.
inline int resolve_thread_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("BFCS_THREADS")) {
        const int v = std::atoi(env);
        if (v > 0) return v;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Runs fn(begin, end) over a static block partition of [0, count).
// Work item i always lands in the same range for a given count, so any
// scheme that writes to per-index slots is reproducible for every thread
// count. The first worker exception, if any, is rethrown after join.
template <typename Fn>
inline void parallel_for_ranges(std::size_t count, int threads, Fn&& fn) {
    const int workers = threads > 0 ? threads : 1;
    if (count == 0) return;
    if (workers == 1 || count < 2) {
        fn(std::size_t{0}, count);
        return;
    }
    const std::size_t n_workers =
        std::min<std::size_t>(static_cast<std::size_t>(workers), count);
    const std::size_t chunk = (count + n_workers - 1) / n_workers;

    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(n_workers);
    pool.reserve(n_workers);
    for (std::size_t w = 0; w < n_workers; ++w) {
        const std::size_t begin = w * chunk;
        const std::size_t end = std::min(count, begin + chunk);
        pool.emplace_back([&, w, begin, end]() {
            try {
                fn(begin, end);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
}

}  // namespace bfcs
