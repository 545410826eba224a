#pragma once

#include <cstdint>
#include <map>
#include <optional>

#include "slp/eigensolver.hpp"
#include "slp/tridiag.hpp"

namespace slp {

/// Maximal number of strict sign alternations over points in the open
/// interval (0,1). Computed from the interior nodal values with entries
/// below ztol_rel * sup|f| dropped.
int sign_changes(const PiecewiseLinear& f, double ztol_rel = 1e-8);

struct PseudoZeroScan {
    int count = 0;
    /// Smallest margin by which the witness family clears the threshold;
    /// perturbations below half of it cannot destroy the count.
    double margin = 0.0;
};

/// Maximal n admitting points x_1 < ... < x_{n+1} in (0,1) with |f(x_k)| > eps
/// and a point of |f| < eps between each consecutive pair. Left-to-right scan
/// over the piecewise-linear graph; the greedy count is maximal because any
/// witness family can be left-shifted onto the scan's excursion blocks.
PseudoZeroScan pseudo_zeros_scan(const PiecewiseLinear& f, double eps);

inline int pseudo_zeros(const PiecewiseLinear& f, double eps) {
    return pseudo_zeros_scan(f, eps).count;
}

struct ZeroComponents {
    int interior = 0;  ///< components of {|f| <= ztol} not containing 0 or 1
    bool touches_left = false;
    bool touches_right = false;
    std::vector<double> interior_locations;  ///< one representative per component
};

/// Connected components of {x : |f(x)| <= ztol} on the graph; crossings
/// between nodes count as components.
ZeroComponents zero_components(const PiecewiseLinear& f, double ztol);

/// Representative locations of the interior zero components.
std::vector<double> zero_locations(const PiecewiseLinear& f, double ztol);

struct OscillationReport {
    int sign_changes = 0;
    std::map<double, int> pseudo_zeros;  ///< eps -> count
    int zero_components_interior = 0;
    std::vector<double> epsilons_used;
    double ztol = 0.0;
};

/// Runs all three counters on one function; eps scales and ztol are relative
/// to sup|f|.
OscillationReport analyze(const PiecewiseLinear& f, const std::vector<double>& eps_scales,
                          double ztol_rel = 1e-8);

/// u = R y with R = [A(0)]^{-1} M_r (so that R y_n = y_n / lambda_n on
/// eigenpairs). Requires a potential-free pencil whose A(0) is positive
/// definite: Dirichlet-Dirichlet, Neumann-Dirichlet, or RobinRight (C > 0).
class Resolvent {
  public:
    explicit Resolvent(const DiscretePencil& disc);

    std::vector<double> apply(const std::vector<double>& y_dof) const;
    PiecewiseLinear apply(const PiecewiseLinear& y) const;
    const DiscretePencil& pencil() const { return disc_; }

  private:
    DiscretePencil disc_;
    TridiagLU lu_;
};

PiecewiseLinear resolvent_apply(const DiscretePencil& disc, const PiecewiseLinear& y);

struct RegularityViolation {
    int trial = 0;
    int power = 0;  ///< 1 for R, 2 for R^2
    double eps = 0.0;
    int pseudo_zeros = 0;
    int sign_changes = 0;
};

struct RegularityReport {
    int trials = 0;
    std::vector<double> eps_scales;
    int violations_r = 0;
    int violations_r2 = 0;
    std::optional<RegularityViolation> worst;
    bool pass() const { return violations_r == 0 && violations_r2 == 0; }
};

/// Seeded random probe of strengthened sign-regularity: for every trial y and
/// every eps in the grid, pseudo_zeros(R y, eps) <= sign_changes(y), and the
/// same for R^2. Violations are reported, not thrown.
RegularityReport regularity_probe(const DiscretePencil& disc, int trials, std::uint64_t seed,
                                  const std::vector<double>& eps_scales);

struct PowerIterationResult {
    std::vector<PiecewiseLinear> iterates;
    std::vector<double> errors;  ///< M_r-distance to ±y_target per step
    int converged_step = -1;     ///< first step with error <= target_err
};

/// Normalized iteration of R toward the eigenfunction of index n_target;
/// y0 must have no eigencomponents below n_target. Throws on stagnation.
PowerIterationResult power_iteration(const DiscretePencil& disc, const PiecewiseLinear& y0,
                                     const std::vector<EigenPair>& pairs, int n_target,
                                     int steps, double target_err = 1e-6);

struct ChebyshevOutcome {
    int sign_changes = 0;
    int zero_components_interior = 0;
    std::map<double, int> pseudo_zeros;
    bool lower_ok = false;  ///< sign_changes >= n-1
    bool upper_ok = false;  ///< interior zero components <= N-1
};

/// Checks the combination sum_{k=n}^{N} alpha_k y_k against the Chebyshev
/// bounds. alpha must not be all zero; its first and last entries drive the
/// two bounds respectively.
ChebyshevOutcome chebyshev_check(const std::vector<EigenPair>& pairs,
                                 const std::vector<double>& alpha, int n, int N,
                                 const std::vector<double>& eps_scales,
                                 double ztol_rel = 1e-8);

/// Strict interlacing of interior zeros: between consecutive zeros of y_next
/// lies exactly one zero of y_prev.
bool interlaced(const PiecewiseLinear& y_prev, const PiecewiseLinear& y_next,
                double ztol_rel = 1e-8);

}  // namespace slp
