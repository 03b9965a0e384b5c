#pragma once

#include <atomic>
#include <functional>
#include <thread>
#include <vector>

namespace atomtf {

/// Run body(i) for i in [begin, end) on up to `jobs` workers.  Results must be
/// written to pre-allocated, index-disjoint slots so reductions stay
/// deterministic regardless of scheduling.
inline void parallel_for(int begin, int end, int jobs,
                         const std::function<void(int)>& body) {
    if (end <= begin) return;
    if (jobs <= 1 || end - begin == 1) {
        for (int i = begin; i < end; ++i) body(i);
        return;
    }
    std::atomic<int> next{begin};
    auto worker = [&]() {
        for (;;) {
            const int i = next.fetch_add(1);
            if (i >= end) return;
            body(i);
        }
    };
    const int nthreads = std::min(jobs, end - begin);
    std::vector<std::thread> pool;
    pool.reserve(nthreads - 1);
    for (int t = 0; t + 1 < nthreads; ++t) pool.emplace_back(worker);
    worker();
    for (auto& th : pool) th.join();
}

}  // namespace atomtf
