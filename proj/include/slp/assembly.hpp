#pragma once

#include <array>
#include <complex>
#include <utility>

#include "slp/coefficients.hpp"

namespace slp {

/// Canonical boundary-condition kinds. "Dirichlet" is the essential
/// condition y = 0, "Neumann" the natural condition on the quasi-derivative.
/// RobinRight is Neumann at 0 together with y^[1](1) + C y(1) = 0, C > 0.
enum class BcKind {
    DirichletDirichlet,
    NeumannDirichlet,
    DirichletNeumann,
    NeumannNeumann,
    RobinRight,
};

const char* to_string(BcKind kind);

/// V_kk = -cot(arg(U_kk)/2) for U_kk != 1, else 0; arg taken in (-pi, pi].
std::array<double, 2> boundary_matrix(std::complex<double> u00, std::complex<double> u11);

struct BoundarySpec {
    std::complex<double> u00{1.0, 0.0};
    std::complex<double> u11{1.0, 0.0};
    double v00 = 0.0;
    double v11 = 0.0;
    BcKind kind = BcKind::DirichletDirichlet;
    double robin_c = 0.0;

    static BoundarySpec canonical(BcKind kind, double robin_c = 0.0);
    /// Derives V and the kind from a diagonal unitary matrix; keeps the V
    /// entries in the spec (not yet folded into the potential).
    static BoundarySpec from_unitary(std::complex<double> u00, std::complex<double> u11);

    bool dirichlet_left() const {
        return kind == BcKind::DirichletDirichlet || kind == BcKind::DirichletNeumann;
    }
    bool dirichlet_right() const {
        return kind == BcKind::DirichletDirichlet || kind == BcKind::NeumannDirichlet;
    }
};

/// Rewrites a diagonal-unitary condition as one of the four canonical kinds;
/// nonzero V entries at natural endpoints become delta perturbations of the
/// potential at that endpoint. Returns the canonicalized spec (V = 0) and
/// the atoms to append to q.
std::pair<BoundarySpec, std::vector<Atom>> canonicalize_bc(std::complex<double> u00,
                                                           std::complex<double> u11);

struct SymTridiagonal {
    std::vector<double> diag;
    std::vector<double> off;  // size diag.size() - 1

    explicit SymTridiagonal(std::size_t n = 0)
        : diag(n, 0.0), off(n > 0 ? n - 1 : 0, 0.0) {}

    std::size_t size() const { return diag.size(); }
    std::vector<double> apply(const std::vector<double>& x) const;
    double inner(const std::vector<double>& x, const std::vector<double>& y) const;
    SymTridiagonal slice(std::size_t first, std::size_t count) const;
    double inf_norm() const;
};

/// A full meshed problem instance.
struct Problem {
    Mesh mesh;
    PiecewiseConstant p;
    GeneralizedFunction q;
    GeneralizedFunction r;
    BoundarySpec bc;
};

/// Change of variable t -> 1 - t: coefficients reflected about 1/2 (primitive
/// re-anchored at 0, atoms moved to 1 - a), boundary data swapped. Maps
/// DirichletNeumann to NeumannDirichlet and conversely.
Problem reflect(const Problem& problem);

/// Symmetric tridiagonal realization of the pencil form
///   ∫ p |y'|^2 + ∫ (q - lambda r) |y|^2 + <V y^, y^> (+ C |y(1)|^2),
/// restricted to the degrees of freedom left after eliminating Dirichlet
/// nodes. A(lambda) = a_p + b_q - lambda m_r.
struct DiscretePencil {
    SymTridiagonal a_p;
    SymTridiagonal b_q;
    SymTridiagonal m_r;
    Mesh mesh;
    BoundarySpec bc;
    std::size_t first_dof = 0;
    bool potential_free = false;  ///< q identically zero (boundary terms aside)

    std::size_t dof_count() const { return a_p.size(); }
    SymTridiagonal at(double lambda) const;

    /// Zero-extends a dof vector to a nodal function.
    PiecewiseLinear expand(const std::vector<double>& u) const;
    /// Restriction of nodal values to the dof range.
    std::vector<double> restrict_to_dofs(const PiecewiseLinear& y) const;
};

/// Potential form matrix on all nodes via the omega representation
/// ∫ q phi_i phi_j = -∫ omega (phi_i phi_j)' + omega1 phi_i(1) phi_j(1).
SymTridiagonal q_form_matrix_omega(const GeneralizedFunction& q, const Mesh& mesh);

/// Same matrix by direct integration of the density and point evaluation of
/// the atoms. Independent route kept for cross-checking the omega route.
SymTridiagonal q_form_matrix_direct(const GeneralizedFunction& q, const Mesh& mesh);

/// Weight form matrix on all nodes: density part is a weighted mass matrix,
/// atoms contribute c phi_i(a) phi_j(a).
SymTridiagonal mass_matrix(const GeneralizedFunction& r, const Mesh& mesh);

/// Weighted stiffness matrix on all nodes.
SymTridiagonal stiffness_matrix(const PiecewiseConstant& p);

DiscretePencil assemble(const PiecewiseConstant& p, const GeneralizedFunction& q,
                        const GeneralizedFunction& r, const BoundarySpec& bc,
                        const Mesh& mesh);

inline DiscretePencil assemble(const Problem& pr) {
    return assemble(pr.p, pr.q, pr.r, pr.bc, pr.mesh);
}

}  // namespace slp
