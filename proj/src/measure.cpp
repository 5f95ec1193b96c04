#include "gridtargets/measure.hpp"

#include "gridtargets/grid_core.hpp"
#include "gridtargets/parallel.hpp"
#include "gridtargets/quadrature.hpp"
#include "gridtargets/rng.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <sstream>

namespace gridtargets {

namespace {

constexpr double kYFloor = 0.8660254037844386;  // sqrt(3)/2

McEstimate bernoulli_estimate(std::int64_t hits, std::int64_t samples, std::uint64_t seed) {
    McEstimate est;
    est.samples = samples;
    est.seed = seed;
    est.value = samples > 0 ? static_cast<double>(hits) / static_cast<double>(samples) : 0.0;
    est.stderr_ =
        samples > 0 ? std::sqrt(est.value * (1.0 - est.value) / static_cast<double>(samples))
                    : 0.0;
    return est;
}

/// Count of indices in [0, samples) satisfying a pure predicate, evaluated in
/// parallel; exact integer reduction keeps the result scheduling-independent.
std::int64_t count_hits(std::int64_t samples, const std::function<bool(std::int64_t)>& hit) {
    std::atomic<std::int64_t> total{0};
    parallel_for(samples, 0, [&](std::int64_t i) {
        if (hit(i)) total.fetch_add(1, std::memory_order_relaxed);
    });
    return total.load();
}

struct FrameDraw {
    double x, y, theta;
    long proposals;
};

FrameDraw draw_frame(CounterRng& rng) {
    FrameDraw d{0.0, 0.0, 0.0, 0};
    do {
        ++d.proposals;
        d.y = kYFloor / (1.0 - rng.next_double());
        d.x = rng.next_double(-0.5, 0.5);
    } while (d.x * d.x + d.y * d.y < 1.0);
    d.theta = rng.next_double(0.0, 2.0 * std::numbers::pi);
    return d;
}

Matrix frame_basis(const FrameDraw& d) {
    const double s = std::sqrt(d.y);
    Matrix base(2, 2);
    base << 1.0 / s, d.x / s, 0.0, s;
    Matrix rot(2, 2);
    rot << std::cos(d.theta), -std::sin(d.theta), std::sin(d.theta), std::cos(d.theta);
    return rot * base;
}

}  // namespace

double q_exact(const std::vector<double>& a_diag, double r) {
    const int k = static_cast<int>(a_diag.size());
    if (k < 2) throw std::invalid_argument("q_exact: need at least two diagonal entries");
    if (!(r > 0.0)) throw std::invalid_argument("q_exact: r must be positive");
    double product = 1.0;
    for (double a : a_diag) {
        if (!(a > 0.0)) throw std::invalid_argument("q_exact: diagonal entries must be positive");
        product *= a;
    }
    if (std::fabs(product - 1.0) > 1e-9)
        throw std::invalid_argument("q_exact: diagonal product must be 1");
    for (int i = 0; i + 1 < k; ++i)
        if (a_diag[i] > a_diag[i + 1])
            throw std::invalid_argument("q_exact: diagonal must be non-decreasing");
    if (!(a_diag[k - 2] < 2.0 * r && 2.0 * r <= a_diag[k - 1]))
        throw std::invalid_argument(
            "q_exact: ordering condition a_{k-1} < 2r <= a_k fails; use q_monte_carlo");
    double head = 1.0;
    for (int i = 0; i + 1 < k; ++i) head *= a_diag[i];
    return 1.0 - 2.0 * r * head;
}

McEstimate q_monte_carlo(const Grid& lattice, double r, std::int64_t samples, std::uint64_t seed,
                         const EnumLimits& limits) {
    check_unimodular(lattice);
    if (sup_norm(lattice.shift) > limits.zero_tolerance)
        throw std::invalid_argument("q_monte_carlo: expected a lattice (zero shift)");
    if (samples < 1) throw std::invalid_argument("q_monte_carlo: samples must be >= 1");
    const double log_r = std::log(r);
    const int k = lattice.dim();
    const std::int64_t hits = count_hits(samples, [&](std::int64_t i) {
        CounterRng rng(seed, static_cast<std::uint64_t>(i));
        Vector u(k);
        for (int d = 0; d < k; ++d) u(d) = rng.next_double();
        Grid probe{lattice.basis, -(lattice.basis * u)};
        return delta(probe, limits) >= log_r;  // -inf (distance 0) never hits
    });
    return bernoulli_estimate(hits, samples, seed);
}

Grid sample_haar_grid2_one(std::uint64_t seed, std::uint64_t index, Haar2Stats* stats) {
    CounterRng rng(seed, index);
    const FrameDraw d = draw_frame(rng);
    if (stats) {
        stats->proposals += d.proposals;
        stats->accepts += 1;
    }
    Grid grid;
    grid.basis = frame_basis(d);
    Vector u(2);
    u << rng.next_double(), rng.next_double();
    grid.shift = grid.basis * u;
    return grid;
}

Grid sample_haar_lattice2_one(std::uint64_t seed, std::uint64_t index) {
    CounterRng rng(seed, index);
    const FrameDraw d = draw_frame(rng);
    Grid lattice;
    lattice.basis = frame_basis(d);
    lattice.shift = Vector::Zero(2);
    return lattice;
}

std::vector<Grid> sample_haar_grid2(std::int64_t count, std::uint64_t seed, Haar2Stats* stats) {
    if (count < 1) throw std::invalid_argument("sample_haar_grid2: count must be >= 1");
    std::vector<Grid> grids(static_cast<std::size_t>(count));
    std::vector<long> proposals(static_cast<std::size_t>(count), 0);
    parallel_for(count, 0, [&](std::int64_t i) {
        Haar2Stats local;
        grids[static_cast<std::size_t>(i)] =
            sample_haar_grid2_one(seed, static_cast<std::uint64_t>(i), &local);
        proposals[static_cast<std::size_t>(i)] = local.proposals;
    });
    if (stats) {
        for (long p : proposals) stats->proposals += p;
        stats->accepts += count;
    }
    return grids;
}

McEstimate phi_estimate(double z, std::int64_t samples, std::uint64_t seed,
                        const EnumLimits& limits) {
    if (samples < 1) throw std::invalid_argument("phi_estimate: samples must be >= 1");
    const std::int64_t hits = count_hits(samples, [&](std::int64_t i) {
        const Grid grid = sample_haar_grid2_one(seed, static_cast<std::uint64_t>(i));
        return delta(grid, limits) >= z;
    });
    return bernoulli_estimate(hits, samples, seed);
}

double athreya_bound(double r, int k) {
    if (!(r > 0.0)) throw std::invalid_argument("athreya_bound: r must be positive");
    if (k < 1) throw std::invalid_argument("athreya_bound: k must be >= 1");
    return 1.0 / (1.0 + std::pow(2.0 * r, k));
}

double siegel_lower_bound(double r, int k) {
    if (k < 2) throw std::invalid_argument("siegel_lower_bound: k must be >= 2");
    const double edge = 2.0 * r * std::sqrt(static_cast<double>(k));
    if (!(edge > 1.0))
        throw std::invalid_argument("siegel_lower_bound: region empty (need 2 r sqrt(k) > 1)");

    // Terms c * (2 r sqrt(k))^{-rpow/(k-1)} * exp(sum p_i x_i) over the still
    // unintegrated variables l..k-1; rpow + sum p_i == k(k-1) throughout.
    struct Term {
        double coeff;
        long rpow;
        std::vector<long> exps;  // exps[i] is p_{i+1}
    };
    const long conserved = static_cast<long>(k) * (k - 1);
    auto check_conserved = [&](const Term& t, int from) {
        long total = t.rpow;
        for (int i = from; i < k - 1; ++i) total += t.exps[static_cast<std::size_t>(i)];
        if (total != conserved)
            throw std::logic_error("siegel_lower_bound: exponent conservation violated");
    };

    std::vector<Term> terms;
    {
        Term t1{1.0, 0, std::vector<long>(static_cast<std::size_t>(k - 1))};
        Term t2{-1.0, -(static_cast<long>(k) - 1), std::vector<long>(static_cast<std::size_t>(k - 1))};
        for (int i = 0; i < k - 1; ++i) {
            t1.exps[static_cast<std::size_t>(i)] = 2L * (i + 1);
            t2.exps[static_cast<std::size_t>(i)] = 2L * (i + 1) + 1;
        }
        check_conserved(t1, 0);
        check_conserved(t2, 0);
        terms = {t1, t2};
    }

    // Integrate x_1, ..., x_{k-2} from x_{l+1} up to -log(edge)/(k-1); each
    // term splits into an evaluated-at-the-top piece and a lower-limit piece
    // that folds p_l into p_{l+1}.
    for (int l = 0; l < k - 2; ++l) {
        std::vector<Term> next;
        next.reserve(terms.size() * 2);
        for (const Term& t : terms) {
            const long p = t.exps[static_cast<std::size_t>(l)];
            Term upper{t.coeff / static_cast<double>(p), t.rpow + p, t.exps};
            upper.exps[static_cast<std::size_t>(l)] = 0;
            Term lower{-t.coeff / static_cast<double>(p), t.rpow, t.exps};
            lower.exps[static_cast<std::size_t>(l)] = 0;
            lower.exps[static_cast<std::size_t>(l + 1)] += p;
            check_conserved(upper, l + 1);
            check_conserved(lower, l + 1);
            next.push_back(std::move(upper));
            next.push_back(std::move(lower));
        }
        terms = std::move(next);
    }

    // Final variable runs from -infinity, leaving coeff/p * edge^{-k} pieces.
    double constant = 0.0;
    for (const Term& t : terms) {
        const long p = t.exps[static_cast<std::size_t>(k - 2)];
        if (p <= 0) throw std::logic_error("siegel_lower_bound: nonpositive final exponent");
        if (t.rpow + p != conserved)
            throw std::logic_error("siegel_lower_bound: exponent conservation violated");
        constant += t.coeff / static_cast<double>(p);
    }
    return constant * std::pow(edge, -k);
}

double fundamental_domain_total_measure() {
    static const double value = [] {
        const auto fiber_mass = [](double x) {
            const double y_low = std::sqrt(1.0 - x * x);  // >= sqrt(3)/2 on |x| <= 1/2
            // integral of dy/y^2 from y_low to infinity, under u = 1/y
            return integrate([](double) { return 1.0; }, 0.0, 1.0 / y_low, 1e-12);
        };
        const double area = integrate(fiber_mass, -0.5, 0.5, 1e-10);
        return 2.0 * std::numbers::pi * area;
    }();
    return value;
}

PhiReport phi_report(double r, std::int64_t samples, std::uint64_t seed,
                     const EnumLimits& limits) {
    if (!(r > 0.0)) throw std::invalid_argument("phi_report: r must be positive");
    PhiReport report;
    report.r = r;
    report.z = std::log(r);
    report.estimate = phi_estimate(report.z, samples, seed, limits);
    report.athreya = athreya_bound(r, 2);
    report.raw_lower = std::numbers::pi / (12.0 * r * r);
    report.raw_upper = std::numbers::pi / (3.0 * r * r);
    report.total_measure = fundamental_domain_total_measure();
    report.renorm_lower = report.raw_lower / report.total_measure;
    report.renorm_upper = report.raw_upper / report.total_measure;
    const double slack = 3.0 * report.estimate.stderr_;
    report.below_athreya = report.estimate.value <= report.athreya + slack;
    report.within_raw_bounds = report.estimate.value >= report.raw_lower - slack &&
                               report.estimate.value <= report.raw_upper + slack;
    report.within_renorm_bounds = report.estimate.value >= report.renorm_lower - slack &&
                                  report.estimate.value <= report.renorm_upper + slack;
    return report;
}

}  // namespace gridtargets
