#include "heis/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <thread>
#include <vector>

namespace heis {

namespace {
std::atomic<int> g_threads{0};  // 0 = pick hardware default lazily
}

void set_thread_count(int k) { g_threads.store(k > 0 ? k : 0); }

int thread_count() {
    int k = g_threads.load();
    if (k > 0) return k;
    unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(size_t count, const std::function<void(size_t)>& fn) {
    const int workers = std::min<size_t>(static_cast<size_t>(thread_count()), count) > 0
                            ? static_cast<int>(std::min<size_t>(static_cast<size_t>(thread_count()), count))
                            : 1;
    if (workers <= 1 || count < 2) {
        for (size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (size_t i = static_cast<size_t>(w); i < count; i += static_cast<size_t>(workers)) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

}  // namespace heis
