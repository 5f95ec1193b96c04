#include "gridtargets/parallel.hpp"

#include <cmath>
#include <cstdlib>
#include <mutex>
#include <string>

namespace gridtargets {

int effective_threads(int requested) {
    if (const char* env = std::getenv("GRIDTARGETS_THREADS")) {
        try {
            const int capped = std::stoi(env);
            if (capped >= 1) return requested >= 1 ? std::min(requested, capped) : capped;
        } catch (const std::exception&) {
            // ignore malformed env values
        }
    }
    if (requested >= 1) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn) {
    threads = effective_threads(threads);
    if (n <= 0) return;
    if (threads == 1 || n < 256) {
        for (std::int64_t i = 0; i < n; ++i) fn(i);
        return;
    }
    constexpr std::int64_t kChunk = 256;
    std::atomic<std::int64_t> cursor{0};
    std::exception_ptr first_error;
    std::atomic<bool> failed{false};
    std::mutex error_mutex;
    auto worker = [&]() {
        for (;;) {
            const std::int64_t begin = cursor.fetch_add(kChunk);
            if (begin >= n || failed.load(std::memory_order_relaxed)) return;
            const std::int64_t end = std::min(begin + kChunk, n);
            try {
                for (std::int64_t i = begin; i < end; ++i) fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!failed.exchange(true)) first_error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (failed.load()) std::rethrow_exception(first_error);
}

double Welford::stderr_of_mean() const {
    return count > 1 ? std::sqrt(variance() / static_cast<double>(count)) : 0.0;
}

}  // namespace gridtargets
