#pragma once

#include "gridtargets/dani.hpp"

#include <vector>

namespace gridtargets {

enum class SeriesTag { Convergent, Divergent, Unknown };

const char* to_string(SeriesTag tag);

struct SeriesPoint {
    long index = 0;
    double term = 0.0;
    double partial = 0.0;
};

struct SeriesVerdict {
    SeriesTag tag = SeriesTag::Unknown;
    std::vector<SeriesPoint> partials;

    double total() const { return partials.empty() ? 0.0 : partials.back().partial; }
};

/// Compensated (Neumaier) accumulator; summing in increasing index order with
/// this keeps long scans bit-reproducible under chunked evaluation.
struct CompensatedSum {
    double sum = 0.0;
    double comp = 0.0;

    void add(double x) {
        const double t = sum + x;
        if (std::fabs(sum) >= std::fabs(x))
            comp += (sum - t) + x;
        else
            comp += (x - t) + sum;
        sum = t;
    }
    double value() const { return sum + comp; }
};

/// Convergence of sum_j j^{a-2} (log j)^{-b}: convergent iff a < 1, or
/// a == 1 with b > 1.
SeriesTag classify_powerlog(double C, double a, double b);

/// Closed-form verdict for a profile when one is known, else Unknown.
SeriesTag classify_profile(const ApproxProfile& profile);

/// Partial sums of sum_{j=ceil(T0)}^{J} 1 / (psi(j) j^2).
SeriesVerdict psisum_partial(const ApproxProfile& profile, long J);

/// Partial sums of sum_{t=ceil(t0)}^{t_max} e^{-(m+n) z(t)}.
SeriesVerdict deltasum_partial(const DaniFunction& dani, long t_max);

struct ComparisonReport {
    std::vector<long> horizons;          // increasing J horizons (doubling)
    std::vector<double> matched_t;       // t with t + n z(t) ~ log J
    std::vector<double> psisum_values;
    std::vector<double> deltasum_values;
    std::vector<double> ratio;           // deltasum / psisum
    bool psisum_plateaued = false;       // last doubling grew by < 1%
    bool deltasum_plateaued = false;
    bool psisum_grew = false;            // last doubling grew by > 50%
    bool deltasum_grew = false;
    bool mismatch = false;               // one plateaued while the other grew
};

/// Evaluates both series at doubling horizons J/8, J/4, J/2, J with the
/// t-horizons matched through t_of_T, and flags qualitative disagreement.
/// The contract is qualitative (both bounded or both unbounded); the report
/// cannot distinguish very slow divergence from convergence.
ComparisonReport compare_dani_sums(const ApproxProfile& profile, const Dimensions& dims, long J,
                                   long t_max);

/// CSV with columns index,term,partial_sum.
std::string series_csv(const SeriesVerdict& verdict);

}  // namespace gridtargets
