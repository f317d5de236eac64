#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <exception>
#include <mutex>
#include <thread>
#include <type_traits>
#include <vector>

namespace lrperc {

unsigned default_threads();

/// Runs fn(replica) for replica = 0..reps-1 on a pool of `threads` workers
/// pulling indices from a shared counter. Results are stored by replica index,
/// so anything folded from the returned vector is independent of scheduling.
template <class Fn>
auto run_replicas(std::uint64_t reps, unsigned threads, Fn&& fn)
    -> std::vector<std::invoke_result_t<Fn&, std::uint64_t>>
{
    using Result = std::invoke_result_t<Fn&, std::uint64_t>;
    // vector<bool> packs bits; concurrent writes to neighbours would race.
    static_assert(!std::is_same_v<Result, bool>, "return a byte-sized type instead of bool");
    std::vector<Result> out(reps);
    if (reps == 0) return out;

    threads = std::max(1u, threads);
    if (threads == 1 || reps == 1) {
        for (std::uint64_t r = 0; r < reps; ++r) out[r] = fn(r);
        return out;
    }

    std::atomic<std::uint64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        while (true) {
            auto r = next.fetch_add(1, std::memory_order_relaxed);
            if (r >= reps) return;
            try {
                out[r] = fn(r);
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(reps);
                return;
            }
        }
    };

    auto count = static_cast<unsigned>(std::min<std::uint64_t>(threads, reps));
    std::vector<std::thread> pool;
    pool.reserve(count);
    for (unsigned t = 0; t < count; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
    return out;
}

} // namespace lrperc
