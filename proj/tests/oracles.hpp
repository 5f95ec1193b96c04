#pragma once

// Test-only oracles, kept independent of the library's enumeration path.

#include "gridtargets/rng.hpp"
#include "gridtargets/types.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace oracles {

using gridtargets::Matrix;
using gridtargets::Vector;

/// Brute-force minimal sup-norm of basis*c + shift over the cube |c_i| <= R.
inline double naive_min_supnorm(const Matrix& basis, const Vector& shift, long R,
                                bool skip_zero = false) {
    const int k = static_cast<int>(basis.cols());
    std::vector<long> c(k, -R);
    double best = std::numeric_limits<double>::infinity();
    for (;;) {
        bool is_zero = skip_zero;
        if (skip_zero)
            for (int i = 0; i < k; ++i)
                if (c[i] != 0) { is_zero = false; break; }
        if (!is_zero) {
            Vector v = shift;
            for (int i = 0; i < k; ++i) v += static_cast<double>(c[i]) * basis.col(i);
            best = std::min(best, v.lpNorm<Eigen::Infinity>());
        }
        int d = 0;
        while (d < k && c[d] == R) c[d++] = -R;
        if (d == k) break;
        ++c[d];
    }
    return best;
}

/// Random basis with entries uniform in [-5, 5], rescaled to determinant 1.
/// Retries until reasonably non-singular.
inline Matrix random_unimodular_basis(int k, gridtargets::CounterRng& rng) {
    for (;;) {
        Matrix B(k, k);
        for (int i = 0; i < k; ++i)
            for (int j = 0; j < k; ++j) B(i, j) = rng.next_double(-5.0, 5.0);
        double det = B.determinant();
        if (std::fabs(det) < 0.5) continue;
        if (det < 0) B.col(0) = -B.col(0);
        B /= std::pow(std::fabs(det), 1.0 / k);
        return B;
    }
}

/// Random integer unimodular matrix built from elementary column operations.
inline Matrix random_integer_unimodular(int k, gridtargets::CounterRng& rng, int ops = 12) {
    Matrix U = Matrix::Identity(k, k);
    for (int s = 0; s < ops; ++s) {
        const int i = static_cast<int>(rng.next_u64() % static_cast<unsigned>(k));
        int j = static_cast<int>(rng.next_u64() % static_cast<unsigned>(k));
        if (i == j) j = (j + 1) % k;
        const double mult = static_cast<double>(static_cast<long>(rng.next_u64() % 5) - 2);
        U.col(i) += mult * U.col(j);
    }
    return U;
}

/// Two-sample Kolmogorov-Smirnov statistic.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    double stat = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i] <= b[j]) ++i;
        else ++j;
        const double fa = static_cast<double>(i) / a.size();
        const double fb = static_cast<double>(j) / b.size();
        stat = std::max(stat, std::fabs(fa - fb));
    }
    return stat;
}

}  // namespace oracles
