#include "fracident/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace fracident {

int thread_count() {
    static const int n = [] {
        if (const char* env = std::getenv("FRACIDENT_THREADS")) {
            int v = std::atoi(env);
            if (v >= 1) return v;
        }
        unsigned hw = std::thread::hardware_concurrency();
        return hw == 0 ? 1 : static_cast<int>(hw);
    }();
    return n;
}

void parallel_for(std::int64_t begin, std::int64_t end,
                  const std::function<void(std::int64_t)>& fn) {
    const std::int64_t count = end - begin;
    if (count <= 0) return;
    const int workers = thread_count();
    if (workers == 1 || count < 64) {
        for (std::int64_t i = begin; i < end; ++i) fn(i);
        return;
    }
    std::atomic<std::int64_t> next(begin);
    const std::int64_t chunk = std::max<std::int64_t>(1, count / (8 * workers));
    auto work = [&] {
        for (;;) {
            std::int64_t lo = next.fetch_add(chunk);
            if (lo >= end) return;
            std::int64_t hi = std::min(lo + chunk, end);
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (int t = 1; t < workers; ++t) pool.emplace_back(work);
    work();
    for (auto& th : pool) th.join();
}

} // namespace fracident
