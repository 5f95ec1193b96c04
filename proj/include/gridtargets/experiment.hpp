#pragma once

#include "gridtargets/dani.hpp"
#include "gridtargets/dirichlet.hpp"
#include "gridtargets/series.hpp"
#include "gridtargets/types.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gridtargets {

/// Manifest of a zero-one ensemble experiment. The report is a pure function
/// of this struct; wall-clock diagnostics go to stderr, never into it.
struct ExperimentConfig {
    Dimensions dims;
    std::string profile_spec = "powerlog:C=1,a=1,b=0,T0=2";
    long ensemble = 1;            // number of sampled pairs
    long T_hi = 100;
    std::uint64_t seed = 1;
    int threads = 0;              // 0 = auto (GRIDTARGETS_THREADS / hardware)
    std::int64_t q_budget = kDefaultQBudget;

    void validate() const;
};

struct PairOutcome {
    long pair_index = 0;
    long n_failures = 0;
    long recent_failures = 0;
    long first_failure = -1;      // -1 when none
    long last_failure = -1;
    bool dirichlet_up_to = false;
    bool enum_failed = false;     // budget exhausted; excluded from the fraction
};

struct ExperimentReport {
    ExperimentConfig config;
    long T_lo = 0;
    std::vector<PairOutcome> pairs;
    double fraction_no_recent_failure = 0.0;
    SeriesTag psisum_verdict = SeriesTag::Unknown;
    std::vector<long> failures_per_T;   // indexed by T - T_lo
    std::vector<long> attempts_per_T;
    long enum_failures = 0;
};

/// Samples ensemble pairs (A, b) with entries i.i.d. uniform on [0, 1)
/// (membership is invariant under integer shifts of the entries, so the unit
/// cube is Lebesgue-representative), scans each for integer-T solvability,
/// and aggregates. Deterministic for fixed (config, seed) at any parallelism.
ExperimentReport run_zero_one(const ExperimentConfig& config);

/// Deterministic pair sample: entries of A row-major, then b.
PairAB sample_pair(const Dimensions& dims, std::uint64_t seed, std::uint64_t pair_index);

std::string experiment_report_json(const ExperimentReport& report);

/// CSV histogram: columns T,attempts,failures.
std::string experiment_histogram_csv(const ExperimentReport& report);

}  // namespace gridtargets
