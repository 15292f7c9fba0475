#pragma once

#include <atomic>
#include <thread>
#include <vector>

namespace genbound {

/// Run fn(i) for i in [0, n). Each index writes only its own slot, so the
/// result is identical for any worker count; reductions happen afterwards
/// in index order.
template <typename Fn>
void for_each_index(long n, int workers, Fn&& fn) {
    if (workers <= 1 || n <= 1) {
        for (long i = 0; i < n; ++i) fn(i);
        return;
    }
    int count = static_cast<int>(std::min<long>(workers, n));
    std::atomic<long> next{0};
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (int w = 0; w < count; ++w)
        pool.emplace_back([&] {
            for (long i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (std::thread& t : pool) t.join();
}

}  // namespace genbound
