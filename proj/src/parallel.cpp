#include "bosegas/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace bosegas {

namespace {
std::atomic<int> g_max_threads{0};  // 0 = auto

int resolve_threads() {
    int n = g_max_threads.load();
    if (n <= 0) {
        unsigned hw = std::thread::hardware_concurrency();
        n = hw == 0 ? 1 : static_cast<int>(hw);
    }
    return std::max(1, std::min(n, 64));
}
}  // namespace

void set_max_threads(int n) { g_max_threads.store(n); }

int max_threads() { return resolve_threads(); }

void parallel_for_chunks(std::int64_t n,
                         const std::function<void(std::int64_t, std::int64_t)>& fn) {
    if (n <= 0) return;
    int workers = resolve_threads();
    // Thread startup is not worth it for small loops.
    if (workers == 1 || n < 2048) {
        fn(0, n);
        return;
    }
    workers = static_cast<int>(std::min<std::int64_t>(workers, n));
    const std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] { fn(lo, hi); });
    }
    for (auto& t : pool) t.join();
}

void parallel_for_items(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    int workers = static_cast<int>(std::min<std::int64_t>(resolve_threads(), n));
    if (workers == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const std::int64_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) {
        const std::int64_t lo = w * chunk;
        const std::int64_t hi = std::min<std::int64_t>(n, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&fn, lo, hi] {
            for (std::int64_t i = lo; i < hi; ++i) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    parallel_for_chunks(n, [&fn](std::int64_t lo, std::int64_t hi) {
        for (std::int64_t i = lo; i < hi; ++i) fn(i);
    });
}

}  // namespace bosegas
