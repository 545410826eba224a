#pragma once

#include <optional>

#include "slp/assembly.hpp"
#include "slp/eigensolver.hpp"

namespace slp {

/// Solution Y of the first-order system
///   Y1' = (omega Y1 + Y2) / p,   Y2' = -omega (omega Y1 + Y2) / p,
/// with uniformly positive first component and ∫ dx / Y1^2 = 1.
/// Y2 is the quasi-derivative p Y1' - omega Y1. The fine trajectory of the
/// integrator is kept for the quadratures that follow.
struct FundamentalPair {
    PiecewiseLinear y1;
    PiecewiseLinear y2;
    double xi = 0.0;
    double c_init = 0.0;  ///< free constant of the Dirichlet construction
    int substeps = 0;     ///< integrator substeps per cell
    std::vector<double> sub_t;
    std::vector<double> sub_y1;
    std::vector<double> sub_y2;
    double min_y1 = 0.0;

    double y1_end() const { return y1.values.back(); }
    double y2_end() const { return y2.values.back(); }
};

/// Integrates the system per cell with fixed 4th-order steps, splitting
/// exactly at the jump nodes of omega. NeumannDirichlet / NeumannNeumann
/// start from Y(0) = (1, 0); DirichletDirichlet integrates backward from
/// (0, -1) at t = 1 and restarts forward from (Z1(0), Z2(0) + C), C > 0.
/// Throws "conjugate point encountered" if Y1 loses positivity (signals an
/// invalid shift upstream).
FundamentalPair solve_fundamental(const PiecewiseConstant& p, const ShiftedPrimitive& omega,
                                  BcKind kind, double c_init = 1.0, int substeps = 16);

struct WeakSolutionCheck {
    double max_residual = 0.0;
    /// Y2(1)/Y1(1) + omega1; reported for NeumannNeumann sources, where it
    /// must be positive.
    std::optional<double> robin_constant;
};

/// Verifies, on every basis function of the dof space, the identity
///   ∫ p Y1' y' + ∫ (q - xi r) Y1 y = [Y2(1) + omega1 Y1(1)] y(1).
WeakSolutionCheck verify_weak_solution(const FundamentalPair& pair, const Problem& problem,
                                       const ShiftedPrimitive& omega);

/// tau(t) = ∫_0^t dx / Y1^2: strictly increasing, tau(0) = 0, tau(1) = 1.
struct TauMap {
    Mesh mesh;                ///< source mesh
    std::vector<double> tau;  ///< images of the source nodes

    double at_node(std::size_t i) const { return tau[i]; }
    /// Monotone bisection over the stored nodal values + linear interpolation.
    double inverse(double s) const;
};

TauMap build_tau(const FundamentalPair& pair, const Mesh& mesh);

struct PushedCoefficients {
    Mesh mesh_hat;
    PiecewiseConstant p_hat;
    GeneralizedFunction r_hat;
};

/// Pushes p and r forward through tau: p composes with tau^{-1} (a cell map),
/// the measure r gains the weight Y1^2 (atoms) resp. Y1^4 (density, the extra
/// Y1^2 being the Jacobian), realized on the primitive as
/// W_rhat(tau(t)) = ∫_0^t Y1^2 dW_r.
PushedCoefficients pushforward(const PiecewiseConstant& p, const GeneralizedFunction& r,
                               const FundamentalPair& pair, const TauMap& tau,
                               const Mesh& mesh);

/// Dirichlet/Neumann-Dirichlet conditions survive unchanged; NeumannNeumann
/// becomes RobinRight with C = Y2(1)/Y1(1) + omega1 (must be positive).
BoundarySpec transformed_bc(const FundamentalPair& pair, double omega1, BcKind kind);

/// The scaling map y -> y / Y1 carried to the image mesh: nodal values
/// (y/Y1)(x_i) placed at tau(x_i).
PiecewiseLinear apply_scaling(const PiecewiseLinear& y, const FundamentalPair& pair,
                              const TauMap& tau, const Mesh& mesh_hat);

struct TransformResult {
    Problem source;  ///< problem actually transformed (reflected if needed)
    bool reflected = false;
    double xi = 0.0;
    ShiftedPrimitive omega;
    FundamentalPair pair;
    TauMap tau;
    Problem transformed;  ///< q == 0; eigenvalue mu maps back as lambda = mu + xi
    double identity_residual = 0.0;
    std::optional<double> robin_constant;
};

/// Full pipeline: shift, fundamental solution, change of variable, pushed
/// coefficients, transformed boundary condition. DirichletNeumann problems
/// are reflected first.
TransformResult eliminate_potential(const Problem& problem, const SolverOptions& opts = {},
                                    double c_init = 1.0, int substeps = 16);

}  // namespace slp
