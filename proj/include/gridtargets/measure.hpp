#pragma once

#include "gridtargets/types.hpp"

#include <cstdint>
#include <vector>

namespace gridtargets {

/// Q for an ordered diagonal lattice: requires the product of a_diag to be 1
/// and a_1 <= ... <= a_{k-1} < 2r <= a_k. Returns 1 - 2r a_1 ... a_{k-1}.
/// Outside the ordering condition use q_monte_carlo.
double q_exact(const std::vector<double>& a_diag, double r);

/// Fraction of the torus at sup-norm distance >= r from the lattice, sampled
/// uniformly in basis coordinates. Distances are exact enumerations via delta
/// on the shifted grid (a grid through 0 counts as distance 0).
McEstimate q_monte_carlo(const Grid& lattice, double r, std::int64_t samples, std::uint64_t seed,
                         const EnumLimits& limits = {});

/// Rejection diagnostics for the k = 2 Haar sampler.
struct Haar2Stats {
    std::int64_t proposals = 0;
    std::int64_t accepts = 0;

    double acceptance_ratio() const {
        return proposals > 0 ? static_cast<double>(accepts) / static_cast<double>(proposals) : 0.0;
    }
};

/// One Haar-distributed unimodular grid in R^2, a pure function of
/// (seed, index): hyperbolic fundamental-domain coordinates (x, y) with
/// density dx dy / y^2 (inverse-CDF in y, rejection against |z| >= 1),
/// uniform frame angle, torus shift uniform in basis coordinates.
Grid sample_haar_grid2_one(std::uint64_t seed, std::uint64_t index, Haar2Stats* stats = nullptr);

/// Same draws with the shift dropped: Haar on the space of lattices.
Grid sample_haar_lattice2_one(std::uint64_t seed, std::uint64_t index);

std::vector<Grid> sample_haar_grid2(std::int64_t count, std::uint64_t seed,
                                    Haar2Stats* stats = nullptr);

/// Monte Carlo estimate of the measure of {Delta >= z} on the k = 2 grid
/// space (the super-level mass of the grid-height function).
McEstimate phi_estimate(double z, std::int64_t samples, std::uint64_t seed,
                        const EnumLimits& limits = {});

/// 1 / (1 + (2r)^k): the random-Minkowski upper bound for the measure of
/// grids avoiding the sup-norm ball of radius r.
double athreya_bound(double r, int k);

/// Exact evaluation of the Siegel-set lower-bound integral by its term
/// recursion; positive and exactly proportional to r^{-k}. Requires
/// 2 r sqrt(k) > 1.
double siegel_lower_bound(double r, int k);

/// Total mass of dx dy / y^2 dtheta over the fundamental domain x frame
/// circle, by adaptive quadrature (analytically 2 pi^2 / 3). Cached.
double fundamental_domain_total_measure();

/// phi_estimate packaged with the bounds it is compared against.
struct PhiReport {
    double r = 1.0;
    double z = 0.0;
    McEstimate estimate;
    double athreya = 0.0;
    double raw_lower = 0.0;      // pi / (12 r^2), as printed in the source analysis
    double raw_upper = 0.0;      // pi / (3 r^2)
    double renorm_lower = 0.0;   // raw bounds divided by the total measure
    double renorm_upper = 0.0;
    double total_measure = 0.0;
    bool below_athreya = false;          // estimate <= athreya + 3 stderr
    bool within_raw_bounds = false;
    bool within_renorm_bounds = false;   // within 3 stderr slack
};

PhiReport phi_report(double r, std::int64_t samples, std::uint64_t seed,
                     const EnumLimits& limits = {});

}  // namespace gridtargets
