#pragma once

#include <cstdint>
#include <cstdlib>
#include <thread>
#include <vector>

namespace rlnclab {

// Worker count resolution: an explicit request wins, then the
// RLNC_LAB_THREADS environment variable, then hardware concurrency. The
// result only affects scheduling; all tallies are merged in a fixed order, so
// every worker count produces bit-identical results.
inline int resolve_worker_count(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("RLNC_LAB_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) return n;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

// Splits [0, total) into one contiguous chunk per worker and runs
// fn(worker, lo, hi) on each. Returns the per-worker results in worker order.
template <typename Tally, typename Fn>
std::vector<Tally> run_partitioned(std::uint64_t total, int workers, Fn fn) {
    if (workers < 1) workers = 1;
    const auto n = static_cast<std::uint64_t>(workers);
    std::vector<Tally> results(static_cast<std::size_t>(workers));
    if (total == 0) return results;

    std::vector<std::thread> threads;
    threads.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
        const std::uint64_t lo = total / n * static_cast<std::uint64_t>(w) +
                                 std::min<std::uint64_t>(static_cast<std::uint64_t>(w), total % n);
        std::uint64_t hi = lo + total / n;
        if (static_cast<std::uint64_t>(w) < total % n) ++hi;
        threads.emplace_back(
            [&results, fn, w, lo, hi] { results[static_cast<std::size_t>(w)] = fn(w, lo, hi); });
    }
    for (auto& t : threads) t.join();
    return results;
}

}  // namespace rlnclab
