#include "gridtargets/grid_core.hpp"

#include <atomic>
#include <cmath>
#include <iostream>
#include <limits>
#include <sstream>

namespace gridtargets {

namespace {

constexpr double kDetWarn = 1e-9;
constexpr double kDetError = 1e-6;
constexpr double kConditionCap = 1e12;

std::atomic<bool> det_warning_issued{false};

struct Gso {
    Matrix mu;        // lower triangular, mu(j,i) for i<j
    Vector bstar_sq;  // squared Gram-Schmidt norms
};

Gso compute_gso(const Matrix& B) {
    const int k = static_cast<int>(B.cols());
    Gso g{Matrix::Zero(k, k), Vector::Zero(k)};
    Matrix bstar = B;
    for (int j = 0; j < k; ++j) {
        for (int i = 0; i < j; ++i) {
            g.mu(j, i) = B.col(j).dot(bstar.col(i)) / g.bstar_sq(i);
            bstar.col(j) -= g.mu(j, i) * bstar.col(i);
        }
        g.bstar_sq(j) = bstar.col(j).squaredNorm();
        if (!(g.bstar_sq(j) > 0.0))
            throw std::invalid_argument("basis columns are linearly dependent");
    }
    return g;
}

void validate_grid_shape(const Grid& grid) {
    if (grid.basis.rows() != grid.basis.cols())
        throw std::invalid_argument("Grid: basis must be square");
    if (grid.shift.size() != grid.basis.rows())
        throw std::invalid_argument("Grid: shift length must match basis dimension");
    if (!grid.basis.allFinite() || !grid.shift.allFinite())
        throw std::invalid_argument("Grid: entries must be finite");
}

/// Enumerate integer coordinate boxes around a center with given half-widths,
/// tracking the minimal sup-norm of basis*c + shift. skip_zero drops c == 0.
double enumerate_min_supnorm(const Matrix& B, const Vector& shift, const Vector& center,
                             const Vector& half_width, bool skip_zero, std::int64_t max_candidates,
                             double seed_value) {
    const int k = static_cast<int>(B.cols());
    std::vector<long> lo(k), hi(k), c(k);
    double count = 1.0;
    for (int i = 0; i < k; ++i) {
        lo[i] = static_cast<long>(std::ceil(center(i) - half_width(i)));
        hi[i] = static_cast<long>(std::floor(center(i) + half_width(i)));
        if (hi[i] < lo[i]) hi[i] = lo[i];
        count *= static_cast<double>(hi[i] - lo[i] + 1);
    }
    if (count > static_cast<double>(max_candidates)) {
        std::ostringstream msg;
        msg << "enumeration budget exceeded: " << count << " candidates > " << max_candidates
            << " (ill-conditioned basis; reduce the flow range or raise the budget)";
        throw enum_budget_error(msg.str());
    }

    Vector cur = shift;
    for (int i = 0; i < k; ++i) {
        c[i] = lo[i];
        cur += static_cast<double>(lo[i]) * B.col(i);
    }
    double best = seed_value;
    for (;;) {
        bool zero_index = skip_zero;
        if (skip_zero)
            for (int i = 0; i < k; ++i)
                if (c[i] != 0) { zero_index = false; break; }
        if (!zero_index) {
            double norm = 0.0;
            for (int i = 0; i < k; ++i) norm = std::max(norm, std::fabs(cur(i)));
            best = std::min(best, norm);
        }
        int d = 0;
        while (d < k) {
            if (c[d] < hi[d]) {
                ++c[d];
                cur += B.col(d);
                break;
            }
            cur -= static_cast<double>(hi[d] - lo[d]) * B.col(d);
            c[d] = lo[d];
            ++d;
        }
        if (d == k) break;
    }
    return best;
}

Vector dual_l1_norms(const Matrix& Binv) {
    Vector norms(Binv.rows());
    for (int i = 0; i < Binv.rows(); ++i) norms(i) = Binv.row(i).lpNorm<1>();
    return norms;
}

}  // namespace

Grid make_grid(const PairAB& pair, const Dimensions& dims) {
    dims.validate();
    pair.validate(dims);
    const int k = dims.k();
    Grid grid;
    grid.basis = Matrix::Identity(k, k);
    grid.basis.topRightCorner(dims.m, dims.n) = pair.A;
    grid.shift = Vector::Zero(k);
    grid.shift.head(dims.m) = pair.b;
    return grid;
}

Grid make_lattice(const Matrix& A, const Dimensions& dims) {
    return make_grid(PairAB{A, Vector::Zero(dims.m)}, dims);
}

double condition_estimate(const Matrix& basis) {
    const double norm = basis.cwiseAbs().rowwise().sum().maxCoeff();
    const Matrix inv = basis.inverse();
    const double inv_norm = inv.cwiseAbs().rowwise().sum().maxCoeff();
    return norm * inv_norm;
}

void check_unimodular(const Grid& grid) {
    validate_grid_shape(grid);
    const double det_gap = std::fabs(std::fabs(grid.basis.determinant()) - 1.0);
    if (det_gap > kDetError)
        throw std::invalid_argument("Grid: |det(basis)| deviates from 1 by more than 1e-6");
    if (det_gap > kDetWarn && !det_warning_issued.exchange(true))
        std::cerr << "gridtargets: warning: basis determinant off by " << det_gap
                  << " (will error above " << kDetError << ")\n";
}

void reduce_basis(Matrix& basis) {
    const int k = static_cast<int>(basis.cols());
    if (k <= 1) return;
    const double lovasz = 0.99;
    Gso g = compute_gso(basis);
    int j = 1;
    long steps = 0;
    const long step_cap = 10000;
    while (j < k && steps++ < step_cap) {
        for (int i = j - 1; i >= 0; --i) {
            const double q = std::round(g.mu(j, i));
            if (q != 0.0) {
                basis.col(j) -= q * basis.col(i);
                g = compute_gso(basis);
            }
        }
        if (g.bstar_sq(j) >= (lovasz - g.mu(j, j - 1) * g.mu(j, j - 1)) * g.bstar_sq(j - 1)) {
            ++j;
        } else {
            basis.col(j).swap(basis.col(j - 1));
            g = compute_gso(basis);
            j = std::max(j - 1, 1);
        }
    }
}

Grid flow_apply(const Grid& grid, double t, const Dimensions& dims) {
    dims.validate();
    validate_grid_shape(grid);
    if (!std::isfinite(t))
        throw std::invalid_argument("flow_apply: t must be finite");
    if (grid.dim() != dims.k())
        throw std::invalid_argument("flow_apply: grid dimension does not match dims");

    const double up = std::exp(t / dims.m);
    const double down = std::exp(-t / dims.n);
    Grid out = grid;
    out.basis.topRows(dims.m) *= up;
    out.basis.bottomRows(dims.n) *= down;
    out.shift.head(dims.m) *= up;
    out.shift.tail(dims.n) *= down;
    if (condition_estimate(out.basis) > 1e6)
        reduce_basis(out.basis);
    return out;
}

double delta(const Grid& grid, const EnumLimits& limits) {
    limits.validate();
    check_unimodular(grid);

    Matrix B = grid.basis;
    reduce_basis(B);
    if (condition_estimate(B) > kConditionCap)
        throw std::invalid_argument("delta: basis condition number above 1e12 after reduction");

    const Matrix Binv = B.inverse();
    const Vector center = -(Binv * grid.shift);
    const Vector babai = center.array().round();
    const double babai_norm = sup_norm(B * babai + grid.shift);
    if (babai_norm <= limits.zero_tolerance) return -std::numeric_limits<double>::infinity();

    // Any point with ||B c + w|| <= M has |c_i - center_i| <= ||row_i(B^-1)||_1 * M,
    // so this box contains the minimizer.
    const Vector half_width =
        (dual_l1_norms(Binv) * babai_norm * (1.0 + 1e-9)).array() + 1e-9;
    const double best = enumerate_min_supnorm(B, grid.shift, center, half_width,
                                              /*skip_zero=*/false, limits.max_candidates,
                                              babai_norm);
    if (best <= limits.zero_tolerance) return -std::numeric_limits<double>::infinity();
    return std::log(best);
}

double delta0(const Grid& lattice, const EnumLimits& limits) {
    limits.validate();
    check_unimodular(lattice);
    if (sup_norm(lattice.shift) > limits.zero_tolerance)
        throw std::invalid_argument("delta0: lattice must have zero shift");

    Matrix B = lattice.basis;
    reduce_basis(B);
    if (condition_estimate(B) > kConditionCap)
        throw std::invalid_argument("delta0: basis condition number above 1e12 after reduction");

    const int k = static_cast<int>(B.cols());
    double shortest_column = std::numeric_limits<double>::infinity();
    for (int i = 0; i < k; ++i)
        shortest_column = std::min(shortest_column, B.col(i).lpNorm<Eigen::Infinity>());

    const Matrix Binv = B.inverse();
    const Vector half_width =
        (dual_l1_norms(Binv) * shortest_column * (1.0 + 1e-9)).array() + 1e-9;
    const double best =
        enumerate_min_supnorm(B, Vector::Zero(k), Vector::Zero(k), half_width,
                              /*skip_zero=*/true, limits.max_candidates, shortest_column);
    return std::log(best);
}

std::vector<TrajectoryRecord> trajectory(const Grid& grid, const std::vector<double>& t_values,
                                         const std::function<double(double)>& z_of_t,
                                         const Dimensions& dims, const EnumLimits& limits) {
    for (std::size_t i = 0; i < t_values.size(); ++i) {
        if (!std::isfinite(t_values[i]))
            throw std::invalid_argument("trajectory: t values must be finite");
        if (i > 0 && t_values[i] < t_values[i - 1])
            throw std::invalid_argument("trajectory: t values must be sorted");
    }
    std::vector<TrajectoryRecord> records;
    records.reserve(t_values.size());
    for (double t : t_values) {
        TrajectoryRecord rec;
        rec.t = t;
        try {
            rec.delta = delta(flow_apply(grid, t, dims), limits);
        } catch (const enum_budget_error& err) {
            std::ostringstream msg;
            msg << "at t=" << t << ": " << err.what();
            throw enum_budget_error(msg.str());
        }
        if (z_of_t) {
            rec.z = z_of_t(t);
            rec.hit = rec.delta >= *rec.z;
        }
        records.push_back(rec);
    }
    return records;
}

bool grid_equal(const Grid& a, const Grid& b, double tol) {
    if (a.dim() != b.dim()) return false;
    const Matrix U = a.basis.inverse() * b.basis;
    const Matrix Urounded = U.array().round().matrix();
    if (((U - Urounded).cwiseAbs().maxCoeff()) > tol) return false;
    if (std::fabs(std::fabs(Urounded.determinant()) - 1.0) > 0.5) return false;
    const Vector d = a.basis.inverse() * (b.shift - a.shift);
    return (d - Vector(d.array().round())).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace gridtargets
