#include "axilab/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>
#include <vector>

namespace axilab {

int thread_cap() {
    const char* env = std::getenv("AXILAB_THREADS");
    if (!env) return 1;
    const int requested = std::atoi(env);
    const int hw = static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
    return std::clamp(requested, 1, hw);
}

void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& fn) {
    const int cap = thread_cap();
    if (cap <= 1 || n <= 1) {
        for (std::size_t k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (;;) {
            const std::size_t k = next.fetch_add(1);
            if (k >= n) break;
            fn(k);
        }
    };
    std::vector<std::thread> pool;
    const int count = static_cast<int>(std::min<std::size_t>(cap, n));
    pool.reserve(count);
    for (int t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
}

} // namespace axilab
