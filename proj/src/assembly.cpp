#include "slp/assembly.hpp"

#include <cmath>

namespace slp {

const char* to_string(BcKind kind) {
    switch (kind) {
        case BcKind::DirichletDirichlet: return "dirichlet_dirichlet";
        case BcKind::NeumannDirichlet: return "neumann_dirichlet";
        case BcKind::DirichletNeumann: return "dirichlet_neumann";
        case BcKind::NeumannNeumann: return "neumann_neumann";
        case BcKind::RobinRight: return "robin_right";
    }
    return "?";
}

namespace {

bool is_one(std::complex<double> u) { return u.real() == 1.0 && u.imag() == 0.0; }

double v_entry(std::complex<double> u) {
    if (std::abs(std::abs(u) - 1.0) > 1e-12) {
        throw std::domain_error("boundary matrix entry must be unimodular");
    }
    if (is_one(u)) return 0.0;
    if (u.real() == -1.0 && u.imag() == 0.0) return 0.0;  // cot(pi/2)
    double half = 0.5 * std::arg(u);  // arg in (-pi, pi]
    return -std::cos(half) / std::sin(half);
}

BcKind kind_from_flags(bool dirichlet_left, bool dirichlet_right) {
    if (dirichlet_left && dirichlet_right) return BcKind::DirichletDirichlet;
    if (!dirichlet_left && dirichlet_right) return BcKind::NeumannDirichlet;
    if (dirichlet_left && !dirichlet_right) return BcKind::DirichletNeumann;
    return BcKind::NeumannNeumann;
}

}  // namespace

std::array<double, 2> boundary_matrix(std::complex<double> u00, std::complex<double> u11) {
    return {v_entry(u00), v_entry(u11)};
}

BoundarySpec BoundarySpec::canonical(BcKind kind, double robin_c) {
    BoundarySpec bc;
    bc.kind = kind;
    if (kind == BcKind::RobinRight) {
        if (!(robin_c > 0.0)) {
            throw std::invalid_argument("RobinRight requires C > 0");
        }
        bc.robin_c = robin_c;
    }
    bc.u00 = bc.dirichlet_left() ? std::complex<double>(1.0, 0.0)
                                 : std::complex<double>(-1.0, 0.0);
    bc.u11 = bc.dirichlet_right() ? std::complex<double>(1.0, 0.0)
                                  : std::complex<double>(-1.0, 0.0);
    return bc;
}

BoundarySpec BoundarySpec::from_unitary(std::complex<double> u00, std::complex<double> u11) {
    auto v = boundary_matrix(u00, u11);
    BoundarySpec bc;
    bc.u00 = u00;
    bc.u11 = u11;
    bc.v00 = v[0];
    bc.v11 = v[1];
    bc.kind = kind_from_flags(is_one(u00), is_one(u11));
    return bc;
}

std::pair<BoundarySpec, std::vector<Atom>> canonicalize_bc(std::complex<double> u00,
                                                           std::complex<double> u11) {
    BoundarySpec bc = BoundarySpec::from_unitary(u00, u11);
    std::vector<Atom> atoms;
    if (!bc.dirichlet_left() && bc.v00 != 0.0) atoms.push_back({0.0, bc.v00});
    if (!bc.dirichlet_right() && bc.v11 != 0.0) atoms.push_back({1.0, bc.v11});
    bc.v00 = 0.0;
    bc.v11 = 0.0;
    return {bc, atoms};
}

std::vector<double> SymTridiagonal::apply(const std::vector<double>& x) const {
    const std::size_t n = size();
    std::vector<double> y(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        double s = diag[i] * x[i];
        if (i > 0) s += off[i - 1] * x[i - 1];
        if (i + 1 < n) s += off[i] * x[i + 1];
        y[i] = s;
    }
    return y;
}

double SymTridiagonal::inner(const std::vector<double>& x, const std::vector<double>& y) const {
    std::vector<double> my = apply(y);
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * my[i];
    return s;
}

SymTridiagonal SymTridiagonal::slice(std::size_t first, std::size_t count) const {
    SymTridiagonal out(count);
    for (std::size_t i = 0; i < count; ++i) out.diag[i] = diag[first + i];
    for (std::size_t i = 0; i + 1 < count; ++i) out.off[i] = off[first + i];
    return out;
}

double SymTridiagonal::inf_norm() const {
    double m = 0.0;
    for (std::size_t i = 0; i < size(); ++i) {
        double s = std::abs(diag[i]);
        if (i > 0) s += std::abs(off[i - 1]);
        if (i + 1 < size()) s += std::abs(off[i]);
        m = std::max(m, s);
    }
    return m;
}

Problem reflect(const Problem& problem) {
    const Mesh& mesh = problem.mesh;
    const std::size_t n = mesh.node_count();

    std::vector<double> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = 1.0 - mesh.node(n - 1 - i);
    nodes.front() = 0.0;
    nodes.back() = 1.0;
    Mesh rmesh(std::move(nodes));

    std::vector<double> pv(problem.p.values.rbegin(), problem.p.values.rend());

    auto reflect_gf = [&](const GeneralizedFunction& f) {
        const auto& w = f.primitive().values;
        std::vector<double> rw(n);
        for (std::size_t i = 0; i < n; ++i) rw[i] = w[n - 1] - w[n - 1 - i];
        rw[0] = 0.0;
        std::vector<Atom> atoms;
        for (const Atom& a : f.atoms()) atoms.push_back({1.0 - a.location, a.mass});
        return GeneralizedFunction(PiecewiseLinear(rmesh, std::move(rw)), std::move(atoms));
    };

    BoundarySpec bc = problem.bc;
    if (bc.kind == BcKind::RobinRight) {
        throw std::invalid_argument("reflection of a Robin condition is not supported");
    }
    std::swap(bc.u00, bc.u11);
    std::swap(bc.v00, bc.v11);
    bc.kind = kind_from_flags(problem.bc.dirichlet_right(), problem.bc.dirichlet_left());

    return Problem{rmesh, PiecewiseConstant(rmesh, std::move(pv)), reflect_gf(problem.q),
                   reflect_gf(problem.r), bc};
}

SymTridiagonal q_form_matrix_omega(const GeneralizedFunction& q, const Mesh& mesh) {
    ShiftedPrimitive om = shifted_primitive(q, GeneralizedFunction::zero(mesh), 0.0, mesh);
    const std::size_t n = mesh.node_count();
    SymTridiagonal b(n);
    // On a cell with hats L, R and omega affine with traces (wl, wr):
    //   -∫ omega (L^2)' = (2 wl + wr)/3
    //   -∫ omega (R^2)' = -(wl + 2 wr)/3
    //   -∫ omega (L R)' = (wr - wl)/6
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double wl = om.left[c], wr = om.right[c];
        b.diag[c] += (2.0 * wl + wr) / 3.0;
        b.diag[c + 1] -= (wl + 2.0 * wr) / 3.0;
        b.off[c] += (wr - wl) / 6.0;
    }
    b.diag[n - 1] += om.omega1;
    return b;
}

SymTridiagonal q_form_matrix_direct(const GeneralizedFunction& q, const Mesh& mesh) {
    return mass_matrix(q, mesh);
}

SymTridiagonal mass_matrix(const GeneralizedFunction& r, const Mesh& mesh) {
    if (!r.mesh().same_as(mesh)) {
        throw std::invalid_argument("coefficient primitive must live on the problem mesh");
    }
    r.require_atoms_on(mesh);
    const std::size_t n = mesh.node_count();
    SymTridiagonal m(n);
    const auto& w = r.primitive().values;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double h = mesh.cell_width(c);
        double density = (w[c + 1] - w[c]) / h;
        m.diag[c] += density * h / 3.0;
        m.diag[c + 1] += density * h / 3.0;
        m.off[c] += density * h / 6.0;
    }
    for (const Atom& a : r.atoms()) {
        m.diag[*mesh.find_node(a.location)] += a.mass;
    }
    return m;
}

SymTridiagonal stiffness_matrix(const PiecewiseConstant& p) {
    const Mesh& mesh = p.mesh;
    SymTridiagonal a(mesh.node_count());
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double k = p.in_cell(c) / mesh.cell_width(c);
        a.diag[c] += k;
        a.diag[c + 1] += k;
        a.off[c] -= k;
    }
    return a;
}

SymTridiagonal DiscretePencil::at(double lambda) const {
    SymTridiagonal t(a_p.size());
    for (std::size_t i = 0; i < t.size(); ++i) {
        t.diag[i] = a_p.diag[i] + b_q.diag[i] - lambda * m_r.diag[i];
    }
    for (std::size_t i = 0; i + 1 < t.size(); ++i) {
        t.off[i] = a_p.off[i] + b_q.off[i] - lambda * m_r.off[i];
    }
    return t;
}

PiecewiseLinear DiscretePencil::expand(const std::vector<double>& u) const {
    if (u.size() != dof_count()) {
        throw std::invalid_argument("dof vector size mismatch");
    }
    std::vector<double> v(mesh.node_count(), 0.0);
    for (std::size_t i = 0; i < u.size(); ++i) v[first_dof + i] = u[i];
    return PiecewiseLinear(mesh, std::move(v));
}

std::vector<double> DiscretePencil::restrict_to_dofs(const PiecewiseLinear& y) const {
    if (!y.mesh.same_as(mesh)) {
        throw std::invalid_argument("function lives on a different mesh");
    }
    return std::vector<double>(y.values.begin() + static_cast<std::ptrdiff_t>(first_dof),
                               y.values.begin() + static_cast<std::ptrdiff_t>(first_dof + dof_count()));
}

DiscretePencil assemble(const PiecewiseConstant& p, const GeneralizedFunction& q,
                        const GeneralizedFunction& r, const BoundarySpec& bc,
                        const Mesh& mesh) {
    if (!p.mesh.same_as(mesh)) {
        throw std::invalid_argument("p must live on the problem mesh");
    }
    for (double v : p.values) {
        if (!(v > 0.0)) throw std::domain_error("p must be uniformly positive");
    }
    q.require_atoms_on(mesh);
    r.require_atoms_on(mesh);

    const std::size_t n = mesh.node_count();
    SymTridiagonal a = stiffness_matrix(p);
    SymTridiagonal b = q_form_matrix_omega(q, mesh);
    SymTridiagonal m = mass_matrix(r, mesh);

    if (!bc.dirichlet_left()) b.diag[0] += bc.v00;
    if (!bc.dirichlet_right()) b.diag[n - 1] += bc.v11;
    if (bc.kind == BcKind::RobinRight) {
        if (!(bc.robin_c > 0.0)) throw std::invalid_argument("RobinRight requires C > 0");
        b.diag[n - 1] += bc.robin_c;
    }

    std::size_t first = bc.dirichlet_left() ? 1 : 0;
    std::size_t last = (n - 1) - (bc.dirichlet_right() ? 1 : 0);
    std::size_t count = last - first + 1;

    DiscretePencil disc{a.slice(first, count), b.slice(first, count), m.slice(first, count),
                        mesh, bc, first, q.is_zero()};
    return disc;
}

}  // namespace slp
