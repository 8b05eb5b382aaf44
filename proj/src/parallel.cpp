#include "srgbm/parallel.hpp"

#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace srgbm {

int worker_count() {
    if (const char* env = std::getenv("SRGBM_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) return static_cast<int>(n);
        return 1;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 1 : static_cast<int>(hw);
}

void parallel_for(std::int64_t n, const std::function<void(std::int64_t)>& fn) {
    if (n <= 0) return;
    const int workers = worker_count();
    if (workers == 1 || n == 1) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }

    std::atomic<std::int64_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto drain = [&] {
        for (;;) {
            const std::int64_t i = next.fetch_add(1);
            if (i >= n) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                next.store(n);  // stop handing out work
                return;
            }
        }
    };

    std::vector<std::thread> pool;
    const int spawned = static_cast<int>(std::min<std::int64_t>(workers, n)) - 1;
    pool.reserve(spawned);
    for (int w = 0; w < spawned; ++w) pool.emplace_back(drain);
    drain();
    for (auto& th : pool) th.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace srgbm
