#pragma once

#include <algorithm>
#include <cstddef>
#include <exception>
#include <limits>
#include <thread>
#include <type_traits>
#include <vector>

namespace chdef {

/**
 * results[i] = f(i) for i in [0, count), computed on up to `jobs` threads
 * with a fixed index-to-thread assignment.  The output order never depends
 * on scheduling; if several calls throw, the exception of the smallest
 * index is rethrown.
 */
template <class F>
auto parallel_map(std::size_t count, unsigned jobs, F&& f) -> std::vector<std::invoke_result_t<F&, std::size_t>> {
    using T = std::invoke_result_t<F&, std::size_t>;
    std::vector<T> results(count);
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, jobs), std::max<std::size_t>(count, 1)));
    if (workers <= 1) {
        for (std::size_t i = 0; i < count; ++i) results[i] = f(i);
        return results;
    }
    std::vector<std::size_t> failed_at(workers, std::numeric_limits<std::size_t>::max());
    std::vector<std::exception_ptr> errors(workers);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) {
                try {
                    results[i] = f(i);
                } catch (...) {
                    failed_at[w] = i;
                    errors[w] = std::current_exception();
                    return;
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    auto first = std::min_element(failed_at.begin(), failed_at.end());
    if (*first != std::numeric_limits<std::size_t>::max()) std::rethrow_exception(errors[static_cast<std::size_t>(first - failed_at.begin())]);
    return results;
}

}  // namespace chdef
