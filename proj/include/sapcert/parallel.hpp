#pragma once

#include <algorithm>
#include <cstdlib>
#include <thread>
#include <vector>

namespace sapcert {

/// Worker count: SAP_THREADS caps it when set, otherwise hardware concurrency.
inline int thread_budget() {
    int hw = static_cast<int>(std::thread::hardware_concurrency());
    if (hw <= 0) hw = 1;
    if (const char* env = std::getenv("SAP_THREADS")) {
        const int cap = std::atoi(env);
        if (cap >= 1) return std::min(hw, cap);
    }
    return hw;
}

/// Runs f(i) for i in [begin, end) across the thread budget. Callers keep
/// determinism by writing results into per-index slots and reducing in order.
template <typename F>
void parallel_for(int begin, int end, F&& f) {
    const int count = end - begin;
    if (count <= 0) return;
    const int workers = std::min(thread_budget(), count);
    if (workers <= 1 || count < 4) {
        for (int i = begin; i < end; ++i) f(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const int chunk = (count + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const int lo = begin + w * chunk;
        const int hi = std::min(end, lo + chunk);
        if (lo >= hi) break;
        pool.emplace_back([&f, lo, hi] {
            for (int i = lo; i < hi; ++i) f(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace sapcert
