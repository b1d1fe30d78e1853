#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace iga {

/// Worker count: the IGA_SPECTRA_THREADS environment variable overrides the
/// requested value, which overrides the hardware count.
inline int resolve_thread_count(int requested = 0)
{
    if (const char* env = std::getenv("IGA_SPECTRA_THREADS")) {
        try {
            const int v = std::stoi(env);
            if (v > 0) return v;
        } catch (...) {
        }
    }
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

/// bounded pool over an index range; fn must handle its own exceptions
template <typename Fn>
void parallel_for_index(std::size_t n, int threads, Fn&& fn)
{
    if (n == 0) return;
    threads = std::max(1, std::min<int>(threads, static_cast<int>(n)));
    if (threads == 1) {
        for (std::size_t i = 0; i < n; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&next, n, &fn] {
            for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) fn(i);
        });
    for (auto& th : pool) th.join();
}

}  // namespace iga
