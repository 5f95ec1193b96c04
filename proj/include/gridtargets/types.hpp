#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gridtargets {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;

/// Block dimensions (m rows, n columns) of the approximation problem.
/// The ambient dimension is k = m + n.
struct Dimensions {
    int m = 1;
    int n = 1;

    int k() const { return m + n; }

    void validate() const {
        if (m < 1 || n < 1)
            throw std::invalid_argument("Dimensions: m and n must be >= 1");
    }
};

/// A unimodular grid: the point set {basis*c + shift : c integer vector}.
/// A lattice is a grid with shift == 0.
struct Grid {
    Matrix basis;  // k x k, columns generate the lattice, det == 1 up to tolerance
    Vector shift;  // k

    int dim() const { return static_cast<int>(basis.rows()); }
};

/// An affine form: q |-> A*q + b with A an m x n matrix and b in R^m.
struct PairAB {
    Matrix A;
    Vector b;

    void validate(const Dimensions& dims) const {
        if (A.rows() != dims.m || A.cols() != dims.n)
            throw std::invalid_argument("PairAB: A has wrong shape");
        if (b.size() != dims.m)
            throw std::invalid_argument("PairAB: b has wrong length");
        if (!A.allFinite() || !b.allFinite())
            throw std::invalid_argument("PairAB: entries must be finite");
    }
};

/// Budget and tolerance knobs for exact lattice-point enumeration.
struct EnumLimits {
    std::int64_t max_candidates = 2'000'000;
    double zero_tolerance = 1e-12;  // a point with sup-norm <= this counts as 0

    void validate() const {
        if (max_candidates < 1)
            throw std::invalid_argument("EnumLimits: max_candidates must be >= 1");
        if (!(zero_tolerance > 0.0) || !(zero_tolerance < 1e-6))
            throw std::invalid_argument("EnumLimits: zero_tolerance must lie in (0, 1e-6)");
    }
};

/// One sample along a diagonal-flow trajectory.
struct TrajectoryRecord {
    double t = 0.0;
    double delta = 0.0;              // -inf when the flowed grid contains 0
    std::optional<double> z;         // threshold value, when a solver was supplied
    std::optional<bool> hit;         // delta >= z
};

/// Bernoulli Monte Carlo estimate with its standard error.
struct McEstimate {
    double value = 0.0;
    double stderr_ = 0.0;            // sqrt(value*(1-value)/samples)
    std::int64_t samples = 0;
    std::uint64_t seed = 0;
};

/// Thrown when an enumeration box exceeds its candidate budget.
class enum_budget_error : public std::runtime_error {
  public:
    explicit enum_budget_error(const std::string& what) : std::runtime_error(what) {}
};

inline double sup_norm(const Vector& v) { return v.lpNorm<Eigen::Infinity>(); }

}  // namespace gridtargets
