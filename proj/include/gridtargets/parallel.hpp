#pragma once

#include <atomic>
#include <cstdint>
#include <functional>
#include <thread>
#include <vector>

namespace gridtargets {

/// Worker count: the requested value, overridden by GRIDTARGETS_THREADS when
/// set, defaulting to the hardware concurrency. Always >= 1.
int effective_threads(int requested = 0);

/// Runs fn(i) for i in [0, n). Work is handed out in fixed-size chunks via an
/// atomic cursor; fn must only write to state owned by index i, which keeps
/// results independent of scheduling.
void parallel_for(std::int64_t n, int threads, const std::function<void(std::int64_t)>& fn);

/// Streaming mean/variance accumulator with an order-independent-use merge;
/// callers merge per-block states in block order for determinism.
struct Welford {
    std::int64_t count = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++count;
        const double d = x - mean;
        mean += d / static_cast<double>(count);
        m2 += d * (x - mean);
    }

    void merge(const Welford& other) {
        if (other.count == 0) return;
        if (count == 0) {
            *this = other;
            return;
        }
        const double d = other.mean - mean;
        const std::int64_t total = count + other.count;
        mean += d * static_cast<double>(other.count) / static_cast<double>(total);
        m2 += other.m2 + d * d * static_cast<double>(count) *
                             static_cast<double>(other.count) / static_cast<double>(total);
        count = total;
    }

    double variance() const { return count > 1 ? m2 / static_cast<double>(count - 1) : 0.0; }
    double stderr_of_mean() const;
};

}  // namespace gridtargets
