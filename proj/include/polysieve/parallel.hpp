#pragma once

#include <algorithm>
#include <atomic>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace polysieve {

inline unsigned default_workers() {
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1u : hw;
}

/// Worker count and enumeration budget shared by the box-based computations.
struct ExecOptions {
    unsigned workers = 1;
    std::uint64_t max_tuples = 100'000'000;
    std::uint64_t max_points = 50'000'000; // Farey points / exponential-sum evaluations
};

/// Evaluates `fn(i)` for every chunk index in [0, chunks) on up to `workers`
/// threads and returns the results indexed by chunk. Callers reduce the
/// returned vector in index order, so results do not depend on `workers`.
template <class R, class Fn>
std::vector<R> map_chunks(std::size_t chunks, unsigned workers, Fn&& fn) {
    std::vector<R> out(chunks);
    if (workers <= 1 || chunks <= 1) {
        for (std::size_t i = 0; i < chunks; ++i) out[i] = fn(i);
        return out;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto body = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= chunks) return;
            try {
                out[i] = fn(i);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                next.store(chunks);
                return;
            }
        }
    };
    const unsigned n = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));
    std::vector<std::thread> pool;
    pool.reserve(n);
    for (unsigned t = 0; t < n; ++t) pool.emplace_back(body);
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
    return out;
}

} // namespace polysieve
