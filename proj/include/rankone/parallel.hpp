#pragma once

#include <algorithm>
#include <cstdlib>
#include <exception>
#include <thread>
#include <vector>

namespace rankone {

// Thread budget: RANKONE_THREADS if set and positive, else the hardware
// concurrency. A budget of 1 runs everything inline.
inline int thread_budget() {
    if (const char* env = std::getenv("RANKONE_THREADS")) {
        const long v = std::strtol(env, nullptr, 10);
        if (v >= 1) return static_cast<int>(v);
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

// Runs fn(i) for i in [0, count). Work is partitioned by index into
// contiguous blocks, one per thread, so results written to index-addressed
// storage are identical for any thread count. The first exception (lowest
// block) is rethrown after all threads join.
template <typename Fn>
void parallel_for(int count, Fn&& fn) {
    if (count <= 0) return;
    const int threads = std::min(thread_budget(), count);
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(threads));
    const int block = (count + threads - 1) / threads;
    for (int w = 0; w < threads; ++w) {
        const int lo = w * block;
        const int hi = std::min(count, lo + block);
        pool.emplace_back([&, w, lo, hi] {
            try {
                for (int i = lo; i < hi; ++i) fn(i);
            } catch (...) {
                errors[static_cast<std::size_t>(w)] = std::current_exception();
            }
        });
    }
    for (auto& th : pool) th.join();
    for (auto& err : errors)
        if (err) std::rethrow_exception(err);
}

}  // namespace rankone
