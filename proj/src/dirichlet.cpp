#include "gridtargets/dirichlet.hpp"

#include "gridtargets/grid_core.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace gridtargets {

namespace {

double ipow(double base, int exp) {
    double out = 1.0;
    for (int i = 0; i < exp; ++i) out *= base;
    return out;
}

/// Nearest integer with half-way ties rounded down.
double nearest_down(double x) { return std::ceil(x - 0.5); }

/// Sup-norm distance of A q + b to its optimal integer point.
double residual(const Matrix& A, const Vector& b, const Eigen::VectorXi& q) {
    double worst = 0.0;
    for (int i = 0; i < A.rows(); ++i) {
        double v = b(i);
        for (int j = 0; j < A.cols(); ++j) v += A(i, j) * q(j);
        worst = std::max(worst, std::fabs(v - nearest_down(v)));
    }
    return worst;
}

/// Largest integer j >= 0 with j^n < T.
long q_radius(double T, int n) {
    if (!(T > 0.0)) return -1;
    long j = static_cast<long>(std::floor(std::pow(T, 1.0 / n)));
    while (ipow(static_cast<double>(j + 1), n) < T) ++j;
    while (j > 0 && !(ipow(static_cast<double>(j), n) < T)) --j;
    return j;
}

double shell_candidate_count(long radius, int n) {
    const double side = 2.0 * static_cast<double>(radius) + 1.0;
    return ipow(side, n);
}

/// Visit every q in Z^n with sup-norm exactly s. The last coordinate is
/// forced onto the boundary when no earlier one reached it, so the traversal
/// touches O(shell size) nodes rather than the whole box.
template <class F>
void for_each_on_shell(int n, long s, Eigen::VectorXi& q, int pos, bool boundary_hit, F&& visit) {
    if (pos == n) {
        visit(q);
        return;
    }
    if (!boundary_hit && pos == n - 1) {
        q(pos) = static_cast<int>(-s);
        for_each_on_shell(n, s, q, pos + 1, true, visit);
        q(pos) = static_cast<int>(s);
        for_each_on_shell(n, s, q, pos + 1, true, visit);
        return;
    }
    for (long v = -s; v <= s; ++v) {
        q(pos) = static_cast<int>(v);
        for_each_on_shell(n, s, q, pos + 1, boundary_hit || std::labs(v) == s, visit);
    }
}

template <class F>
void for_each_shell(int n, long s, F&& visit) {
    Eigen::VectorXi q(n);
    if (s == 0) {
        q.setZero();
        visit(q);
        return;
    }
    for_each_on_shell(n, s, q, 0, false, visit);
}

void check_budget(long radius, int n, std::int64_t q_budget, const char* who) {
    if (shell_candidate_count(radius, n) > static_cast<double>(q_budget)) {
        std::ostringstream msg;
        msg << who << ": q enumeration over radius " << radius << " exceeds the budget of "
            << q_budget << " candidates";
        throw enum_budget_error(msg.str());
    }
}

/// Incrementally maintained minimum of the residual over ||q|| <= radius.
class ShellScanner {
  public:
    ShellScanner(const Matrix& A, const Vector& b) : A_(A), b_(b) {}

    double best_up_to(long radius) {
        while (next_shell_ <= radius) {
            for_each_shell(static_cast<int>(A_.cols()), next_shell_, [&](const Eigen::VectorXi& q) {
                best_ = std::min(best_, residual(A_, b_, q));
            });
            ++next_shell_;
        }
        return best_;
    }

  private:
    const Matrix& A_;
    const Vector& b_;
    long next_shell_ = 0;
    double best_ = std::numeric_limits<double>::infinity();
};

}  // namespace

bool solvable_inhom(const PairAB& pair, double psi_value, double T, const Dimensions& dims,
                    std::int64_t q_budget) {
    dims.validate();
    pair.validate(dims);
    if (!(T > 1.0)) throw std::invalid_argument("solvable_inhom: T must exceed 1");
    if (!(psi_value > 0.0)) throw std::invalid_argument("solvable_inhom: psi_value must be positive");
    const long radius = q_radius(T, dims.n);
    check_budget(radius, dims.n, q_budget, "solvable_inhom");
    for (long s = 0; s <= radius; ++s) {
        bool found = false;
        for_each_shell(dims.n, s, [&](const Eigen::VectorXi& q) {
            if (!found && ipow(residual(pair.A, pair.b, q), dims.m) < psi_value) found = true;
        });
        if (found) return true;
    }
    return false;
}

bool solvable_hom(const Matrix& A, double psi_value, double T, const Dimensions& dims,
                  std::int64_t q_budget) {
    dims.validate();
    if (A.rows() != dims.m || A.cols() != dims.n)
        throw std::invalid_argument("solvable_hom: A has wrong shape");
    if (!(T > 1.0)) throw std::invalid_argument("solvable_hom: T must exceed 1");
    if (!(psi_value > 0.0)) throw std::invalid_argument("solvable_hom: psi_value must be positive");
    const long radius = q_radius(T, dims.n);
    check_budget(radius, dims.n, q_budget, "solvable_hom");
    // q = 0 forces p != 0, whose best sup-norm is 1.
    if (1.0 < psi_value) return true;
    const Vector zero = Vector::Zero(dims.m);
    for (long s = 1; s <= radius; ++s) {
        bool found = false;
        for_each_shell(dims.n, s, [&](const Eigen::VectorXi& q) {
            if (!found && ipow(residual(A, zero, q), dims.m) < psi_value) found = true;
        });
        if (found) return true;
    }
    return false;
}

ScanResult scan_membership(const PairAB& pair, const ApproxProfile& profile, long T_hi,
                           const Dimensions& dims, std::int64_t q_budget) {
    dims.validate();
    pair.validate(dims);
    ScanResult result;
    result.T_lo = static_cast<long>(std::ceil(profile.T0()));
    result.T_hi = T_hi;
    if (T_hi < result.T_lo)
        throw std::invalid_argument("scan_membership: T_hi below ceil(T0)");
    check_budget(q_radius(static_cast<double>(T_hi), dims.n), dims.n, q_budget,
                 "scan_membership");

    ShellScanner scanner(pair.A, pair.b);
    for (long T = result.T_lo; T <= T_hi; ++T) {
        const double psi = profile(static_cast<double>(T));
        const double best = scanner.best_up_to(q_radius(static_cast<double>(T), dims.n));
        if (!(ipow(best, dims.m) < psi)) result.failures.push_back(T);
    }
    result.dirichlet_up_to = result.recent_failures() == 0;
    return result;
}

double dynamical_margin(const PairAB& pair, const DaniFunction& dani, double T,
                        const Dimensions& dims, const EnumLimits& limits) {
    if (T < dani.profile().T0() - 1e-12)
        throw std::invalid_argument("dynamical_margin: T below profile domain start");
    const double t = dani.t_of_T(T);
    const Grid flowed = flow_apply(make_grid(pair, dims), t, dims);
    return delta(flowed, limits) - dani.z(t);
}

bool dynamical_check(const PairAB& pair, const DaniFunction& dani, double T,
                     const Dimensions& dims, const EnumLimits& limits) {
    return dynamical_margin(pair, dani, T, dims, limits) < 0.0;
}

SeriesVerdict hom_criterion_series(const ApproxProfile& profile, long i_max) {
    const long i_lo = static_cast<long>(std::ceil(profile.T0()));
    SeriesVerdict verdict;
    if (const auto* p = std::get_if<PowerLogForm>(&profile.form()))
        verdict.tag = (p->a == 1.0 && p->b == 0.0 && p->C < 1.0) ? SeriesTag::Divergent
                                                                 : SeriesTag::Unknown;
    else if (std::holds_alternative<OneMinusPowerForm>(profile.form()))
        verdict.tag = SeriesTag::Convergent;  // terms ~ tau log(i) a i^-tau / i
    else
        verdict.tag = SeriesTag::Unknown;
    if (i_max < i_lo) return verdict;

    CompensatedSum acc;
    double prev_ipsi = -std::numeric_limits<double>::infinity();
    for (long i = i_lo; i <= i_max; ++i) {
        const double di = static_cast<double>(i);
        const double ipsi = di * profile(di);
        if (!(ipsi < 1.0)) {
            std::ostringstream msg;
            msg << "hom_criterion_series: i*psi(i) = " << ipsi << " >= 1 at i = " << i;
            throw std::invalid_argument(msg.str());
        }
        if (ipsi < prev_ipsi - 1e-12) {
            std::ostringstream msg;
            msg << "hom_criterion_series: t*psi(t) decreases at i = " << i;
            throw std::invalid_argument(msg.str());
        }
        prev_ipsi = ipsi;
        const double gap = 1.0 - ipsi;
        const double term = -std::log(gap) * gap / di;
        acc.add(term);
        verdict.partials.push_back({i, term, acc.value()});
    }
    return verdict;
}

void EahConfig::validate(const Dimensions& dims) const {
    dims.validate();
    if (A.rows() != dims.m || A.cols() != dims.n)
        throw std::invalid_argument("EahConfig: A has wrong shape");
    if (x.size() != dims.m || y.size() != dims.m)
        throw std::invalid_argument("EahConfig: x and y must live on the m-torus");
    if (N_max < 0) throw std::invalid_argument("EahConfig: N_max must be >= 0");
    if (radius.size() != static_cast<std::size_t>(N_max) + 1)
        throw std::invalid_argument("EahConfig: need one radius per N in 0..N_max");
    for (std::size_t i = 0; i < radius.size(); ++i) {
        if (!(radius[i] > 0.0) || radius[i] > 0.5)
            throw std::invalid_argument("EahConfig: radii must lie in (0, 1/2]");
        if (i > 0 && radius[i] > radius[i - 1] + 1e-15)
            throw std::invalid_argument("EahConfig: radii must be non-increasing");
    }
}

EahReport eah_check(const EahConfig& cfg, const Dimensions& dims, std::int64_t q_budget) {
    cfg.validate(dims);
    check_budget(cfg.N_max, dims.n, q_budget, "eah_check");

    EahReport report;
    const Vector offset = cfg.x - cfg.y;
    const PairAB reduced_pair{cfg.A, offset};
    ShellScanner scanner(cfg.A, offset);
    for (long N = 0; N <= cfg.N_max; ++N) {
        const double r = cfg.radius[static_cast<std::size_t>(N)];
        const bool direct_hit = scanner.best_up_to(N) < r;
        if (!direct_hit) report.failures.push_back(N);
        if (N >= 1) {  // N = 0 reduces to T = 1, outside the inhom tester's domain
            const double T = ipow(static_cast<double>(N + 1), dims.n);
            const bool via_reduction =
                solvable_inhom(reduced_pair, ipow(r, dims.m), T, dims, q_budget);
            if (via_reduction != direct_hit) report.reduction_mismatches.push_back(N);
        }
    }
    long recent = 0;
    for (long N : report.failures)
        if (N > cfg.N_max / 2) ++recent;
    report.member_up_to_N = recent == 0;

    CompensatedSum acc;
    for (long j = 0; (1L << j) <= cfg.N_max; ++j) {
        const double r = cfg.radius[static_cast<std::size_t>(1L << j)];
        const double ball_measure = std::min(1.0, ipow(2.0 * r, dims.m));
        const double term = 1.0 / (ipow(2.0, dims.n * static_cast<int>(j)) * ball_measure);
        acc.add(term);
        report.dyadic_partials.push_back({j, term, acc.value()});
    }
    return report;
}

}  // namespace gridtargets
