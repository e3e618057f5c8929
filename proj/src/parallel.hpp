#pragma once

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace rkistab {

// Runs body(i) for i in [0, n) on all cores. Each index writes its own
// output slot, so results do not depend on scheduling.
template <class Body>
void parallel_for(int n, Body body) {
    unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    int workers = static_cast<int>(std::min<unsigned>(hw, static_cast<unsigned>(std::max(1, n / 16))));
    if (workers <= 1) {
        for (int i = 0; i < n; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
        pool.emplace_back([&] {
            for (int i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
        });
    for (auto& t : pool) t.join();
}

}  // namespace rkistab
