#include "slp/coefficients.hpp"

namespace slp {

GeneralizedFunction::GeneralizedFunction(PiecewiseLinear primitive, std::vector<Atom> atoms)
    : primitive_(std::move(primitive)), atoms_(std::move(atoms)) {
    if (primitive_.values.front() != 0.0) {
        throw std::invalid_argument("primitive must vanish at 0");
    }
    std::sort(atoms_.begin(), atoms_.end(),
              [](const Atom& a, const Atom& b) { return a.location < b.location; });
    for (std::size_t j = 0; j < atoms_.size(); ++j) {
        double a = atoms_[j].location;
        if (a < 0.0 || a > 1.0) {
            throw std::domain_error("atom outside [0,1]");
        }
        if (j > 0 && !(a > atoms_[j - 1].location)) {
            throw std::invalid_argument("atom locations must be distinct");
        }
    }
}

GeneralizedFunction GeneralizedFunction::lebesgue(const Mesh& m) {
    std::vector<double> w(m.nodes());
    return GeneralizedFunction(PiecewiseLinear(m, std::move(w)), {});
}

double GeneralizedFunction::total_atom_mass() const {
    double s = 0.0;
    for (const Atom& a : atoms_) s += a.mass;
    return s;
}

bool GeneralizedFunction::is_nonnegative_measure() const {
    for (std::size_t c = 0; c + 1 < primitive_.values.size(); ++c) {
        if (primitive_.values[c + 1] < primitive_.values[c]) return false;
    }
    for (const Atom& a : atoms_) {
        if (a.mass < 0.0) return false;
    }
    return true;
}

bool GeneralizedFunction::is_zero() const {
    if (!atoms_.empty()) return false;
    for (double v : primitive_.values) {
        if (v != 0.0) return false;
    }
    return true;
}

void GeneralizedFunction::require_atoms_on(const Mesh& m) const {
    for (const Atom& a : atoms_) {
        if (!m.find_node(a.location)) {
            throw std::invalid_argument("atom location is not a mesh node");
        }
    }
}

ShiftedPrimitive shifted_primitive(const GeneralizedFunction& q,
                                   const GeneralizedFunction& r, double xi,
                                   const Mesh& mesh) {
    if (!q.mesh().same_as(mesh) || !r.mesh().same_as(mesh)) {
        throw std::invalid_argument("coefficient primitives must live on the problem mesh");
    }
    q.require_atoms_on(mesh);
    r.require_atoms_on(mesh);

    const std::size_t cells = mesh.cell_count();
    ShiftedPrimitive sp{mesh, std::vector<double>(cells), std::vector<double>(cells), 0.0, xi};

    // combined atoms of q - xi r, keyed by node index
    std::vector<double> node_mass(mesh.node_count(), 0.0);
    double total = 0.0;
    for (const Atom& a : q.atoms()) {
        node_mass[*mesh.find_node(a.location)] += a.mass;
        total += a.mass;
    }
    for (const Atom& a : r.atoms()) {
        node_mass[*mesh.find_node(a.location)] -= xi * a.mass;
        total -= xi * a.mass;
    }

    // omega on cell c is W(t) + H_c with H_c the mass of atoms at nodes <= x_c
    // (left-continuous: the atom at the right cell boundary is not yet seen).
    double running = 0.0;
    for (std::size_t c = 0; c < cells; ++c) {
        running += node_mass[c];
        double wl = q.primitive().values[c] - xi * r.primitive().values[c];
        double wr = q.primitive().values[c + 1] - xi * r.primitive().values[c + 1];
        sp.left[c] = wl + running;
        sp.right[c] = wr + running;
    }
    double w1 = q.primitive().values.back() - xi * r.primitive().values.back();
    sp.omega1 = w1 + total;
    return sp;
}

bool validate_weight(const GeneralizedFunction& r, const Mesh& mesh) {
    r.require_atoms_on(mesh);
    std::vector<double> node_mass(mesh.node_count(), 0.0);
    for (const Atom& a : r.atoms()) {
        node_mass[*mesh.find_node(a.location)] += a.mass;
    }
    const auto& w = r.primitive().values;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        bool increases = w[c + 1] > w[c];
        bool boundary_atom = node_mass[c] > 0.0 || node_mass[c + 1] > 0.0;
        if (!increases && !boundary_atom) return false;
    }
    return true;
}

double pairing(const GeneralizedFunction& f, const PiecewiseLinear& y) {
    if (!f.mesh().same_as(y.mesh)) {
        throw std::invalid_argument("pairing requires a common mesh");
    }
    double s = 0.0;
    const auto& w = f.primitive().values;
    for (std::size_t c = 0; c < y.mesh.cell_count(); ++c) {
        double h = y.mesh.cell_width(c);
        double density = (w[c + 1] - w[c]) / h;
        s += density * cell_int(h, y.values[c], y.values[c + 1]);
    }
    for (const Atom& a : f.atoms()) {
        s += a.mass * y.values[*y.mesh.find_node(a.location)];
    }
    return s;
}

double pairing(const ShiftedPrimitive& omega, const PiecewiseLinear& y) {
    if (!omega.mesh.same_as(y.mesh)) {
        throw std::invalid_argument("pairing requires a common mesh");
    }
    double s = 0.0;
    for (std::size_t c = 0; c < y.mesh.cell_count(); ++c) {
        double dy = y.values[c + 1] - y.values[c];
        // y' constant on the cell; ∫ omega y' = y' ∫ omega
        s -= dy * 0.5 * (omega.left[c] + omega.right[c]);
    }
    return s + omega.omega1 * y.values.back();
}

GeneralizedFunction resample(const GeneralizedFunction& f, const Mesh& fine) {
    std::vector<double> w(fine.node_count());
    for (std::size_t i = 0; i < fine.node_count(); ++i) {
        w[i] = evaluate(f.primitive(), fine.node(i));
    }
    for (std::size_t i = 0; i < f.mesh().node_count(); ++i) {
        if (!fine.find_node(f.mesh().node(i))) {
            throw std::invalid_argument("resample target must refine the source mesh");
        }
    }
    w[0] = 0.0;
    std::vector<Atom> atoms = f.atoms();
    for (Atom& a : atoms) {
        a.location = fine.node(*fine.find_node(a.location));
    }
    return GeneralizedFunction(PiecewiseLinear(fine, std::move(w)), std::move(atoms));
}

}  // namespace slp
