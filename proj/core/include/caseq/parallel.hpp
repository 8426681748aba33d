#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <thread>
#include <vector>

namespace caseq {

// 0 means "use every hardware thread".
inline unsigned resolve_threads(unsigned requested) {
    if (requested != 0) return requested;
    unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : hw;
}

// Runs fn(begin, end) over contiguous chunks of [0, count). The chunking only
// affects scheduling; callers must write results per index so the output does
// not depend on the thread count.
template <class Fn>
void parallel_chunks(std::size_t count, unsigned threads, Fn&& fn) {
    unsigned workers = resolve_threads(threads);
    if (workers <= 1 || count < 2) {
        if (count > 0) fn(std::size_t{0}, count);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::size_t>(workers, count));
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(workers);
    std::size_t step = (count + workers - 1) / workers;
    for (unsigned w = 0; w < workers; ++w) {
        std::size_t lo = w * step;
        std::size_t hi = std::min(count, lo + step);
        if (lo >= hi) break;
        pool.emplace_back([&, w, lo, hi] {
            try {
                fn(lo, hi);
            } catch (...) {
                errors[w] = std::current_exception();
            }
        });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace caseq
