#pragma once

#include <atomic>
#include <cstddef>
#include <thread>
#include <vector>

namespace gridcast::numeric {

/**
 * Applies fn to every index in [0, n) across worker threads and collects
 * results positionally, so reductions over the output are independent of
 * completion order.
 */
template <typename Result, typename Fn>
std::vector<Result> parallel_map(std::size_t n, Fn&& fn, unsigned max_threads = 0) {
    unsigned workers = max_threads ? max_threads : std::thread::hardware_concurrency();
    if (workers == 0) workers = 1;
    std::vector<Result> results(n);
    if (n == 0) return results;
    if (workers == 1 || n == 1) {
        for (std::size_t i = 0; i < n; ++i) results[i] = fn(i);
        return results;
    }

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        while (true) {
            std::size_t i = next.fetch_add(1);
            if (i >= n) return;
            results[i] = fn(i);
        }
    };
    std::vector<std::thread> threads;
    unsigned count = static_cast<unsigned>(std::min<std::size_t>(workers, n));
    threads.reserve(count);
    for (unsigned t = 0; t < count; ++t) threads.emplace_back(worker);
    for (auto& t : threads) t.join();
    return results;
}

} // namespace gridcast::numeric
