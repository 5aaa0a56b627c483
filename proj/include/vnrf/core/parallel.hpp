#ifndef VNRF_CORE_PARALLEL_HPP
#define VNRF_CORE_PARALLEL_HPP

// Fork-join over index ranges. Work is split into contiguous chunks so that
// callers can merge per-chunk results in chunk order.

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <exception>
#include <string>
#include <thread>
#include <vector>

namespace vnrf
{

/// Thread budget: hardware concurrency, capped by VNRF_THREADS when set.
inline unsigned thread_budget()
{
    unsigned n = std::max(1u, std::thread::hardware_concurrency());
    if (const char* env = std::getenv("VNRF_THREADS")) {
        try {
            const long cap = std::stol(env);
            if (cap >= 1) n = std::min<unsigned>(n, static_cast<unsigned>(cap));
        } catch (...) {
        }
    }
    return n;
}

/// Calls fn(chunk, begin, end) for `chunks` contiguous pieces of [0, n).
template <typename Fn>
void parallel_chunks(std::size_t n, std::size_t chunks, Fn&& fn)
{
    chunks = std::max<std::size_t>(1, std::min(chunks, n == 0 ? 1 : n));
    auto bounds = [&](std::size_t c) { return n * c / chunks; };
    if (chunks == 1) {
        fn(std::size_t{0}, std::size_t{0}, n);
        return;
    }
    std::vector<std::exception_ptr> errors(chunks);
    std::vector<std::thread> pool;
    pool.reserve(chunks - 1);
    for (std::size_t c = 1; c < chunks; ++c)
        pool.emplace_back([&, c] {
            try {
                fn(c, bounds(c), bounds(c + 1));
            } catch (...) {
                errors[c] = std::current_exception();
            }
        });
    try {
        fn(std::size_t{0}, bounds(0), bounds(1));
    } catch (...) {
        errors[0] = std::current_exception();
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

} // namespace vnrf

#endif
