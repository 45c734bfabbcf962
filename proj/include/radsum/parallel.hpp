#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace radsum {

/// Runs fn(worker, task) for every task in [0, tasks), handing tasks out in
/// increasing order.  A worker therefore sees its tasks in increasing order.
/// The first exception thrown by any task is rethrown after all workers join.
template <class Fn>
void parallel_tasks(std::uint64_t tasks, unsigned workers, Fn&& fn) {
    workers = std::max(1u, workers);
    if (workers == 1 || tasks <= 1) {
        for (std::uint64_t t = 0; t < tasks; ++t) fn(0u, t);
        return;
    }
    workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, tasks));
    std::atomic<std::uint64_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            try {
                for (std::uint64_t t = next++; t < tasks; t = next++) fn(w, t);
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next = tasks;
            }
        });
    }
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace radsum
