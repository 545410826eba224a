#pragma once

#include "slp/assembly.hpp"

namespace slp {

struct Inertia {
    int below = 0;  ///< eigenvalues strictly below the probe value
    int zero = 0;   ///< numerically singular pivots at the probe value
    int above = 0;
};

struct SolverOptions {
    double bisect_tol = 1e-12;    ///< bracket width <= bisect_tol * max(1, |lambda|)
    double residual_tol = 1e-10;  ///< inverse-iteration residual threshold (relative)
    int max_iterations = 100;
};

/// All pivots of the symmetric triangular factorization positive.
bool is_positive_definite(const SymTridiagonal& t);

/// Pivot signs of the symmetric triangular factorization of A(lambda).
/// With a positive definite weight this is Sylvester inertia: `below` counts
/// pencil eigenvalues strictly less than lambda.
Inertia inertia(const DiscretePencil& disc, double lambda);

/// Lowest `count` eigenvalues by inertia bisection, strictly increasing,
/// each bracketed to width <= tol * max(1, |lambda|).
std::vector<double> eigenvalues(const DiscretePencil& disc, int count,
                                const SolverOptions& opts = {});

struct EigenPair {
    int index = 0;      ///< 1-based position in the spectrum
    double lambda = 0.0;
    PiecewiseLinear vector;  ///< zero-extended to eliminated nodes
    double residual = 0.0;
};

/// Inverse iteration at lambda_n (+ half bracket width), deterministic start
/// vector, M_r-normalized, sign fixed so the first nonzero nodal value from
/// the left is positive.
EigenPair eigenfunction(const DiscretePencil& disc, double lambda_n,
                        const SolverOptions& opts = {});

std::vector<EigenPair> eigenpairs(const DiscretePencil& disc, int count,
                                  const SolverOptions& opts = {});

/// xi = lambda_1 - 1; checked to make A(xi) positive definite.
double positivity_shift(const DiscretePencil& disc, const SolverOptions& opts = {});

// M_r-geometry helpers on dof vectors.
double m_inner(const DiscretePencil& disc, const std::vector<double>& x,
               const std::vector<double>& y);
double m_norm(const DiscretePencil& disc, const std::vector<double>& x);

}  // namespace slp
