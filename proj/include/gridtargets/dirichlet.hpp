#pragma once

#include "gridtargets/dani.hpp"
#include "gridtargets/series.hpp"
#include "gridtargets/types.hpp"

#include <cstdint>
#include <vector>

namespace gridtargets {

/// Outcome of an integer-T membership scan.
struct ScanResult {
    long T_lo = 0;
    long T_hi = 0;
    std::vector<long> failures;        // integer T where the system is unsolvable
    bool dirichlet_up_to = false;      // no failures with T > T_hi / 2

    long recent_failures() const {
        long count = 0;
        for (long T : failures)
            if (T > T_hi / 2) ++count;
        return count;
    }
};

constexpr std::int64_t kDefaultQBudget = 1'000'000;

/// True iff some q with ||q||^n < T has ||A q + b - p||^m < psi_value for the
/// coordinatewise-nearest p (ties round down). q = 0 participates.
bool solvable_inhom(const PairAB& pair, double psi_value, double T, const Dimensions& dims,
                    std::int64_t q_budget = kDefaultQBudget);

/// Homogeneous variant: b = 0 and the trivial solution (p, q) = (0, 0) is
/// excluded; q = 0 with p != 0 is allowed (it helps only when psi_value > 1).
bool solvable_hom(const Matrix& A, double psi_value, double T, const Dimensions& dims,
                  std::int64_t q_budget = kDefaultQBudget);

/// Evaluates solvable_inhom at every integer T in [ceil(T0), T_hi], reusing
/// q-shells so the scan costs one enumeration of the largest ball. The
/// verdict treats "no failures in the top half of the range" as membership
/// evidence; the raw failure list is always returned.
ScanResult scan_membership(const PairAB& pair, const ApproxProfile& profile, long T_hi,
                           const Dimensions& dims, std::int64_t q_budget = kDefaultQBudget);

/// Delta(g_t Lambda_{A,b}) - z(t) at t = t_of_T(T). Negative iff the system
/// at T is solvable (the correspondence contract tested against
/// solvable_inhom).
double dynamical_margin(const PairAB& pair, const DaniFunction& dani, double T,
                        const Dimensions& dims, const EnumLimits& limits = {});

bool dynamical_check(const PairAB& pair, const DaniFunction& dani, double T,
                     const Dimensions& dims, const EnumLimits& limits = {});

/// Partial sums of -log(1 - i psi(i)) (1 - i psi(i)) / i, with a closed-form
/// verdict only for the c/t and (1 - a t^-tau)/t families. Requires
/// i psi(i) < 1 and t psi(t) non-decreasing on the scanned range (m = n = 1
/// setting).
SeriesVerdict hom_criterion_series(const ApproxProfile& profile, long i_max);

/// Eventually-always-hitting configuration: the Z^n rotation action by the
/// columns of A on the m-torus, target ball of radius r(N) around y.
struct EahConfig {
    Matrix A;                 // m x n
    Vector x;                 // orbit start on the torus
    Vector y;                 // target center
    std::vector<double> radius;  // r(N) for N = 0..N_max, non-increasing, in (0, 1/2]
    long N_max = 0;

    void validate(const Dimensions& dims) const;
};

struct EahReport {
    bool member_up_to_N = false;       // no failures with N > N_max / 2
    std::vector<long> failures;        // N where the orbit segment misses B_N
    std::vector<long> reduction_mismatches;  // N where direct and reduced checks disagree
    std::vector<SeriesPoint> dyadic_partials;  // partial sums of 1/(2^{nj} nu(B_{2^j}))
};

/// Direct orbit check at every N <= N_max, cross-checked against
/// solvable_inhom on the pair (A, x - y) at T = (N+1)^n with
/// psi_value = r(N)^m.
EahReport eah_check(const EahConfig& cfg, const Dimensions& dims,
                    std::int64_t q_budget = kDefaultQBudget);

}  // namespace gridtargets
