#pragma once

#include <algorithm>
#include <cstddef>
#include <functional>
#include <thread>
#include <vector>

namespace spreadnet {

/// Striped parallel map over [0, n). Work item i always lands in slot i, so
/// results are independent of the worker count.
inline void parallel_for(std::size_t n, int jobs, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || n < 2) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    const int workers = std::min<std::size_t>(std::size_t(jobs), n);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = std::size_t(w); i < n; i += std::size_t(workers)) fn(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace spreadnet
