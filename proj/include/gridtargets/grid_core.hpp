#pragma once

#include "gridtargets/types.hpp"

#include <functional>
#include <vector>

namespace gridtargets {

/// Grid of the affine form q |-> A*q + b: block basis [[I_m, A], [0, I_n]],
/// shift (b, 0). Unimodular by construction.
Grid make_grid(const PairAB& pair, const Dimensions& dims);

/// Lattice of the homogeneous form (same block basis, zero shift).
Grid make_lattice(const Matrix& A, const Dimensions& dims);

/// Apply the diagonal flow: the first m coordinates scale by e^{t/m}, the
/// last n by e^{-t/n}. The returned basis is re-reduced when the scaling has
/// made it badly conditioned, which leaves the grid itself unchanged.
Grid flow_apply(const Grid& grid, double t, const Dimensions& dims);

/// In-place integer reduction of the basis columns (size reduction plus
/// Lovasz exchanges). Only unimodular integer column operations are applied,
/// so the generated lattice is unchanged.
void reduce_basis(Matrix& basis);

/// log of the minimal sup-norm over all grid points basis*c + shift.
/// Returns -infinity when the minimum is <= limits.zero_tolerance (the grid
/// contains 0 up to tolerance). The enumeration box provably contains the
/// minimizer; exceeding the candidate budget throws enum_budget_error.
double delta(const Grid& grid, const EnumLimits& limits = {});

/// log of the minimal sup-norm over nonzero lattice vectors. Requires
/// shift == 0; always finite.
double delta0(const Grid& lattice, const EnumLimits& limits = {});

/// Delta along the flow at each t, with optional threshold z(t) and hit flag
/// delta >= z(t). t_values must be finite and sorted.
std::vector<TrajectoryRecord> trajectory(const Grid& grid, const std::vector<double>& t_values,
                                         const std::function<double(double)>& z_of_t,
                                         const Dimensions& dims, const EnumLimits& limits = {});

/// True when the two grids are the same point set: basis1^-1 * basis2 is a
/// unimodular integer matrix and the shifts differ by a lattice vector.
bool grid_equal(const Grid& a, const Grid& b, double tol = 1e-9);

/// Operator-infinity-norm condition number estimate.
double condition_estimate(const Matrix& basis);

/// Soft unimodularity check: warns (once per process) above 1e-9, throws
/// above 1e-6.
void check_unimodular(const Grid& grid);

}  // namespace gridtargets
