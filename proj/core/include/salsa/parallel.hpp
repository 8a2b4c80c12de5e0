#pragma once

#include <algorithm>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

namespace salsa {

// Split [0, total) into contiguous chunks, one worker thread per chunk.
// Workers write disjoint outputs, so results are schedule independent.
template <typename Fn>
void parallel_for(long total, int threads, Fn&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || total < 2) {
        fn(0L, total);
        return;
    }
    const int workers = static_cast<int>(std::min<long>(threads, total));
    std::vector<std::thread> pool;
    pool.reserve(workers);
    const long chunk = (total + workers - 1) / workers;
    for (int w = 0; w < workers; ++w) {
        const long begin = w * chunk;
        const long end = std::min(total, begin + chunk);
        if (begin >= end) break;
        pool.emplace_back([&fn, begin, end] { fn(begin, end); });
    }
    for (auto& t : pool) t.join();
}

// Parallelism budget: explicit argument wins, then SALSA_THREADS, then 1.
inline int resolve_threads(int requested) {
    if (requested > 0) return requested;
    if (const char* env = std::getenv("SALSA_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    return 1;
}

}  // namespace salsa
