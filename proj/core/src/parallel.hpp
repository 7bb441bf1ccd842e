#pragma once

#include <atomic>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

#include "bimmpp/threads.hpp"

namespace bimmpp::detail {

// Runs body(i) for i in [0, n). Each index must write only to its own output
// slot; scheduling order then has no effect on the result.
template <typename F>
void parallel_for(std::size_t n, F&& body) {
    if (n == 0) return;
    const std::size_t workers =
        std::min<std::size_t>(static_cast<std::size_t>(max_threads()), n);
    if (workers <= 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }

    const std::size_t chunk = std::max<std::size_t>(1, n / (workers * 8));
    std::atomic<std::size_t> next{0};
    std::mutex err_mutex;
    std::exception_ptr err;

    auto run = [&] {
        for (;;) {
            const std::size_t begin = next.fetch_add(chunk);
            if (begin >= n) return;
            const std::size_t end = std::min(n, begin + chunk);
            try {
                for (std::size_t i = begin; i < end; ++i) body(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mutex);
                if (!err) err = std::current_exception();
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w) pool.emplace_back(run);
    run();
    for (auto& t : pool) t.join();
    if (err) std::rethrow_exception(err);
}

} // namespace bimmpp::detail
