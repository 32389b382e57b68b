#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace kpp_lab {

/// Runs body(i) for i in [0, n) on up to `workers` threads.
///
/// Indices are handed out in contiguous blocks; results must be written to
/// per-index slots so the outcome does not depend on the worker count. The
/// exception thrown for the lowest failing index is rethrown.
template <class Body>
void parallel_for(std::size_t n, std::size_t workers, Body&& body) {
    workers = std::max<std::size_t>(1, std::min(workers, n));
    if (workers == 1) {
        for (std::size_t i = 0; i < n; ++i) body(i);
        return;
    }
    std::mutex mu;
    std::exception_ptr first_error;
    std::size_t first_index = n;
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        const std::size_t begin = n * w / workers;
        const std::size_t end = n * (w + 1) / workers;
        pool.emplace_back([&, begin, end] {
            for (std::size_t i = begin; i < end; ++i) {
                try {
                    body(i);
                } catch (...) {
                    std::lock_guard lock(mu);
                    if (i < first_index) {
                        first_index = i;
                        first_error = std::current_exception();
                    }
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

/// Pairwise (cascade) sum in fixed index order.
template <class Range>
double pairwise_sum(const Range& values, std::size_t begin, std::size_t end) {
    constexpr std::size_t kBlock = 8;
    if (end - begin <= kBlock) {
        double s = 0.0;
        for (std::size_t i = begin; i < end; ++i) s += values[i];
        return s;
    }
    const std::size_t mid = begin + (end - begin) / 2;
    return pairwise_sum(values, begin, mid) + pairwise_sum(values, mid, end);
}

template <class Range>
double pairwise_sum(const Range& values) {
    return pairwise_sum(values, 0, values.size());
}

}  // namespace kpp_lab
