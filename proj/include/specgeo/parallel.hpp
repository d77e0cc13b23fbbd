#pragma once

#include <algorithm>
#include <thread>
#include <vector>

namespace specgeo {

/// Runs body(i) for i in [0, count) on a few threads. Each index is handled by
/// exactly one thread, so results written per index are deterministic.
template <typename Body>
void parallel_for(int count, Body&& body)
{
    const int workers = std::max(1, std::min<int>(std::thread::hardware_concurrency(), 8));
    if (workers == 1 || count < 64) {
        for (int i = 0; i < count; ++i) body(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (int i = w; i < count; i += workers) body(i);
        });
    }
    for (auto& t : pool) t.join();
}

} // namespace specgeo
