#pragma once

#include "slp/meshfun.hpp"

namespace slp {

struct Atom {
    double location;
    double mass;
};

/// Distribution of the form f = W' + sum_j c_j delta_{a_j}, where the
/// primitive W is piecewise linear with W(0) = 0 (so W' is an L2 density,
/// constant per cell) and the atoms are finitely many point masses.
/// Houses the potential q, the weight r, and reflected/pushed variants.
class GeneralizedFunction {
  public:
    GeneralizedFunction(PiecewiseLinear primitive, std::vector<Atom> atoms);

    static GeneralizedFunction zero(const Mesh& m) {
        return GeneralizedFunction(PiecewiseLinear::zero(m), {});
    }
    /// W(t) = t: the Lebesgue measure.
    static GeneralizedFunction lebesgue(const Mesh& m);

    const PiecewiseLinear& primitive() const { return primitive_; }
    const std::vector<Atom>& atoms() const { return atoms_; }
    const Mesh& mesh() const { return primitive_.mesh; }

    double total_atom_mass() const;
    /// True iff the distribution is a nonnegative measure (nondecreasing
    /// primitive and nonnegative atom masses); required of weights.
    bool is_nonnegative_measure() const;
    bool is_zero() const;

    /// Throws unless every atom location is a node of m.
    void require_atoms_on(const Mesh& m) const;

  private:
    PiecewiseLinear primitive_;
    std::vector<Atom> atoms_;  // sorted by location, distinct
};

/// The function omega in the representation
///   ∫ (q - xi r) y dx = -∫ omega y' dx + omega1 y(1)
/// valid for every y in W2^1[0,1]. omega is affine on each open cell and
/// jumps at interior atoms; the two one-sided cell traces are stored
/// separately so that assembly stays exact. The jump convention is
/// left-continuous.
struct ShiftedPrimitive {
    Mesh mesh;
    std::vector<double> left;   ///< omega(x_c^+), one per cell
    std::vector<double> right;  ///< omega(x_{c+1}^-), one per cell
    double omega1 = 0.0;
    double xi = 0.0;

    /// Trace of omega at t inside cell c (linear interpolation of the
    /// one-sided cell values).
    double in_cell(std::size_t c, double t) const {
        double xl = mesh.node(c), h = mesh.cell_width(c);
        double s = (t - xl) / h;
        return left[c] + s * (right[c] - left[c]);
    }
};

/// Builds the (omega, omega1) representation of q - xi r on the given mesh.
/// Preconditions: primitives of q and r live on `mesh`; all atoms are nodes.
ShiftedPrimitive shifted_primitive(const GeneralizedFunction& q,
                                   const GeneralizedFunction& r, double xi,
                                   const Mesh& mesh);

/// Computable proxy for supp r = [0,1]: every cell must carry positive
/// r-measure, i.e. the primitive strictly increases across the cell or a
/// cell boundary holds an atom with positive mass.
bool validate_weight(const GeneralizedFunction& r, const Mesh& mesh);

/// Duality pairing <f, y> = ∫ W' y dx + sum_j c_j y(a_j), evaluated by
/// closed-form cell quadrature. One of the two independent routes used to
/// cross-check the omega representation.
double pairing(const GeneralizedFunction& f, const PiecewiseLinear& y);

/// Pairing through the omega representation: -∫ omega y' dx + omega1 y(1).
double pairing(const ShiftedPrimitive& omega, const PiecewiseLinear& y);

/// Reinterprets f on a refinement of its mesh (exact; every original node
/// must be present in `fine`).
GeneralizedFunction resample(const GeneralizedFunction& f, const Mesh& fine);

}  // namespace slp
