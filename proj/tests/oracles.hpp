#pragma once

#include <utility>
#include <vector>

#include "slp/assembly.hpp"

// Independent reference computations used only by the test suites. They share
// no code path with the library routines they check.
namespace oracle {

/// Value of the pencil form
///   ∫ p |y'|^2 + ∫ (q - lambda r) |y|^2 + <V y^, y^> (+ C |y(1)|^2)
/// by direct closed-form cell quadrature and atom point evaluation.
double form_value(const slp::Problem& pr, double lambda, const slp::PiecewiseLinear& y);

/// Lowest eigenvalues of -u'' + (sum_j c_j delta_{a_j}) u = lambda u with
/// Dirichlet conditions, discretized by second-order finite differences on a
/// uniform grid with `cells` cells (atom mass lumped as c/h at the nearest
/// interior grid point). Bisection on the factorization sign count.
std::vector<double> fd_dirichlet_delta_eigenvalues(
    const std::vector<std::pair<double, double>>& atoms, int cells, int count);

/// Exhaustive pseudo-zero count: dynamic program over one candidate point per
/// maximal excursion interval of {|f| > eps}, with the dip between two chain
/// points verified by the exact minimum of |f| on the enclosed interval.
/// Realizes the maximum over all admissible point families.
int pseudo_zeros_exhaustive(const slp::PiecewiseLinear& f, double eps);

}  // namespace oracle
