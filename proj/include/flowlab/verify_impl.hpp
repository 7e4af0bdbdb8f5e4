#pragma once

#include <algorithm>
#include <atomic>
#include <thread>

namespace flowlab::verify {

template <class Acc>
std::vector<Acc> run_shards(std::uint64_t total, std::uint64_t seed,
                            const std::function<void(Rng&, std::uint64_t, Acc&)>& body) {
    std::vector<Acc> acc(kShards);
    std::atomic<int> next{0};
    auto work = [&] {
        for (int s = next++; s < kShards; s = next++) {
            const std::uint64_t count = total / kShards + (static_cast<std::uint64_t>(s) < total % kShards ? 1 : 0);
            Rng rng(seed, static_cast<std::uint64_t>(s));
            body(rng, count, acc[static_cast<std::size_t>(s)]);
        }
    };
    const int workers = std::min(worker_count(), kShards);
    if (workers <= 1) {
        work();
        return acc;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& th : pool) th.join();
    return acc;
}

}  // namespace flowlab::verify
