#pragma once

#include <cstdint>

namespace gridtargets {

// Counter-based generator (Philox 2x64, 10 rounds, Salmon et al. 2011).
// A draw is a pure function of (seed, stream, position), so any sample can be
// regenerated in isolation and parallel runs are bit-reproducible regardless
// of scheduling.
struct Philox2x64 {
    static constexpr std::uint64_t kMultiplier = 0xD2B74407B1CE6E93ULL;
    static constexpr std::uint64_t kKeyGamma = 0x9E3779B97F4A7C15ULL;

    static void block(std::uint64_t key, std::uint64_t ctr_hi, std::uint64_t ctr_lo,
                      std::uint64_t& out0, std::uint64_t& out1) {
        std::uint64_t c0 = ctr_hi, c1 = ctr_lo, k = key;
        for (int round = 0; round < 10; ++round) {
            const unsigned __int128 prod =
                static_cast<unsigned __int128>(kMultiplier) * static_cast<unsigned __int128>(c0);
            const std::uint64_t lo = static_cast<std::uint64_t>(prod);
            const std::uint64_t hi = static_cast<std::uint64_t>(prod >> 64);
            c0 = hi ^ k ^ c1;
            c1 = lo;
            k += kKeyGamma;
        }
        out0 = c0;
        out1 = c1;
    }
};

/// One logical random stream: stream ids index Monte Carlo samples, the
/// position counter advances through the draws of that sample.
class CounterRng {
  public:
    CounterRng(std::uint64_t seed, std::uint64_t stream)
        : seed_(seed), stream_(stream) {}

    std::uint64_t next_u64() {
        if (have_buffered_) {
            have_buffered_ = false;
            return buffered_;
        }
        std::uint64_t a, b;
        Philox2x64::block(seed_, stream_, position_++, a, b);
        buffered_ = b;
        have_buffered_ = true;
        return a;
    }

    /// Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform in [lo, hi).
    double next_double(double lo, double hi) { return lo + (hi - lo) * next_double(); }

  private:
    std::uint64_t seed_;
    std::uint64_t stream_;
    std::uint64_t position_ = 0;
    std::uint64_t buffered_ = 0;
    bool have_buffered_ = false;
};

}  // namespace gridtargets
