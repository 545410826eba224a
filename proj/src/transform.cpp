#include "slp/transform.hpp"

#include <cmath>

namespace slp {

namespace {

struct State {
    double y1, y2;
};

State rhs(double om, double p, State y) {
    double flux = (om * y.y1 + y.y2) / p;  // = Y1'
    return {flux, -om * flux};
}

State rk4_step(const ShiftedPrimitive& omega, std::size_t cell, double p, double t,
               double h, State y) {
    State k1 = rhs(omega.in_cell(cell, t), p, y);
    State k2 = rhs(omega.in_cell(cell, t + 0.5 * h), p,
                   {y.y1 + 0.5 * h * k1.y1, y.y2 + 0.5 * h * k1.y2});
    State k3 = rhs(omega.in_cell(cell, t + 0.5 * h), p,
                   {y.y1 + 0.5 * h * k2.y1, y.y2 + 0.5 * h * k2.y2});
    State k4 = rhs(omega.in_cell(cell, t + h), p, {y.y1 + h * k3.y1, y.y2 + h * k3.y2});
    return {y.y1 + h / 6.0 * (k1.y1 + 2.0 * k2.y1 + 2.0 * k3.y1 + k4.y1),
            y.y2 + h / 6.0 * (k1.y2 + 2.0 * k2.y2 + 2.0 * k3.y2 + k4.y2)};
}

struct Trajectory {
    std::vector<double> t, y1, y2;
};

Trajectory integrate_forward(const PiecewiseConstant& p, const ShiftedPrimitive& omega,
                             State start, int nsub) {
    const Mesh& mesh = p.mesh;
    const std::size_t cells = mesh.cell_count();
    Trajectory tr;
    tr.t.resize(cells * nsub + 1);
    tr.y1.resize(tr.t.size());
    tr.y2.resize(tr.t.size());
    State y = start;
    tr.t[0] = mesh.node(0);
    tr.y1[0] = y.y1;
    tr.y2[0] = y.y2;
    std::size_t idx = 0;
    for (std::size_t c = 0; c < cells; ++c) {
        double h = mesh.cell_width(c) / nsub;
        double pc = p.in_cell(c);
        for (int s = 0; s < nsub; ++s) {
            double t = mesh.node(c) + s * h;
            y = rk4_step(omega, c, pc, t, h, y);
            ++idx;
            tr.t[idx] = (s + 1 == nsub) ? mesh.node(c + 1) : t + h;
            tr.y1[idx] = y.y1;
            tr.y2[idx] = y.y2;
        }
    }
    return tr;
}

State integrate_backward_to_zero(const PiecewiseConstant& p, const ShiftedPrimitive& omega,
                                 State end_state, int nsub) {
    const Mesh& mesh = p.mesh;
    State y = end_state;
    for (std::size_t c = mesh.cell_count(); c-- > 0;) {
        double h = -mesh.cell_width(c) / nsub;
        double pc = p.in_cell(c);
        for (int s = 0; s < nsub; ++s) {
            double t = mesh.node(c + 1) + s * h;
            y = rk4_step(omega, c, pc, t, h, y);
            if (!(y.y1 > 0.0)) {
                throw std::runtime_error("conjugate point encountered");
            }
        }
    }
    return y;
}

/// Composite Simpson over the substep grid of one cell; f indexed on the
/// global substep grid.
template <class F>
double simpson_cell(const Trajectory& tr, std::size_t cell, int nsub, F&& f) {
    double s = 0.0;
    std::size_t base = cell * static_cast<std::size_t>(nsub);
    for (int j = 0; j + 1 < nsub; j += 2) {
        std::size_t i0 = base + static_cast<std::size_t>(j);
        double h = tr.t[i0 + 1] - tr.t[i0];
        s += h / 3.0 * (f(i0) + 4.0 * f(i0 + 1) + f(i0 + 2));
    }
    return s;
}

template <class F>
double simpson_cell(const FundamentalPair& pair, std::size_t cell, F&& f) {
    double s = 0.0;
    std::size_t base = cell * static_cast<std::size_t>(pair.substeps);
    for (int j = 0; j + 1 < pair.substeps; j += 2) {
        std::size_t i0 = base + static_cast<std::size_t>(j);
        double h = pair.sub_t[i0 + 1] - pair.sub_t[i0];
        s += h / 3.0 * (f(i0) + 4.0 * f(i0 + 1) + f(i0 + 2));
    }
    return s;
}

}  // namespace

FundamentalPair solve_fundamental(const PiecewiseConstant& p, const ShiftedPrimitive& omega,
                                  BcKind kind, double c_init, int substeps) {
    if (!p.mesh.same_as(omega.mesh)) {
        throw std::invalid_argument("p and omega must share the mesh");
    }
    if (substeps < 8 || substeps % 2 != 0) {
        throw std::invalid_argument("substep count must be even and >= 8");
    }
    if (kind == BcKind::DirichletNeumann || kind == BcKind::RobinRight) {
        throw std::invalid_argument("fundamental solution is built for the canonical kinds "
                                    "with a natural or Dirichlet-Dirichlet setup");
    }

    State start{1.0, 0.0};
    double used_c = 0.0;
    if (kind == BcKind::DirichletDirichlet) {
        if (!(c_init > 0.0)) {
            throw std::invalid_argument("Dirichlet construction requires C > 0");
        }
        State z0 = integrate_backward_to_zero(p, omega, {0.0, -1.0}, substeps);
        start = {z0.y1, z0.y2 + c_init};
        used_c = c_init;
    }

    Trajectory tr = integrate_forward(p, omega, start, substeps);
    double min_y1 = tr.y1[0];
    for (double v : tr.y1) {
        min_y1 = std::min(min_y1, v);
        if (!(v > 0.0)) {
            throw std::runtime_error("conjugate point encountered");
        }
    }

    double total = 0.0;
    for (std::size_t c = 0; c < p.mesh.cell_count(); ++c) {
        total += simpson_cell(tr, c, substeps,
                              [&](std::size_t i) { return 1.0 / (tr.y1[i] * tr.y1[i]); });
    }
    if (!(total > 0.0) || !std::isfinite(total)) {
        throw std::runtime_error("normalization integral is not finite");
    }
    double k = std::sqrt(total);
    for (double& v : tr.y1) v *= k;
    for (double& v : tr.y2) v *= k;
    min_y1 *= k;

    const std::size_t nn = p.mesh.node_count();
    std::vector<double> n1(nn), n2(nn);
    for (std::size_t i = 0; i < nn; ++i) {
        std::size_t idx = i * static_cast<std::size_t>(substeps);
        n1[i] = tr.y1[idx];
        n2[i] = tr.y2[idx];
    }

    FundamentalPair pair{PiecewiseLinear(p.mesh, std::move(n1)),
                         PiecewiseLinear(p.mesh, std::move(n2)),
                         omega.xi,
                         used_c,
                         substeps,
                         std::move(tr.t),
                         std::move(tr.y1),
                         std::move(tr.y2),
                         min_y1};
    return pair;
}

WeakSolutionCheck verify_weak_solution(const FundamentalPair& pair, const Problem& problem,
                                       const ShiftedPrimitive& omega) {
    const Mesh& mesh = problem.mesh;
    const std::size_t last = mesh.node_count() - 1;
    const BoundarySpec& bc = problem.bc;
    std::size_t first_dof = bc.dirichlet_left() ? 1 : 0;
    std::size_t last_dof = last - (bc.dirichlet_right() ? 1 : 0);

    // contribution of cell c to the residual of basis function phi with
    // values (fl, fr) at the cell ends:
    //   ∫ p Y1' phi' - ∫ omega (Y1' phi + Y1 phi')
    auto cell_term = [&](std::size_t c, double fl, double fr) {
        double h = mesh.cell_width(c);
        double pc = problem.p.in_cell(c);
        double dphi = (fr - fl) / h;
        double xl = mesh.node(c);
        return simpson_cell(pair, c, [&](std::size_t i) {
            double t = pair.sub_t[i];
            double om = omega.in_cell(c, t);
            double y1 = pair.sub_y1[i];
            double dy1 = (om * y1 + pair.sub_y2[i]) / pc;
            double phi = fl + (t - xl) / h * (fr - fl);
            return pc * dy1 * dphi - om * (dy1 * phi + y1 * dphi);
        });
    };

    double max_res = 0.0;
    for (std::size_t i = first_dof; i <= last_dof; ++i) {
        double res = 0.0;
        if (i > 0) res += cell_term(i - 1, 0.0, 1.0);
        if (i < last) res += cell_term(i, 1.0, 0.0);
        if (i == last) res -= pair.y2_end();
        max_res = std::max(max_res, std::abs(res));
    }

    WeakSolutionCheck check{max_res, std::nullopt};
    if (bc.kind == BcKind::NeumannNeumann) {
        check.robin_constant = pair.y2_end() / pair.y1_end() + omega.omega1;
    }
    return check;
}

double TauMap::inverse(double s) const {
    if (s < 0.0 || s > 1.0) throw std::domain_error("point outside [0,1]");
    auto it = std::upper_bound(tau.begin(), tau.end(), s);
    std::size_t idx = static_cast<std::size_t>(it - tau.begin());
    if (idx == 0) return mesh.node(0);
    if (idx >= tau.size()) return mesh.node(tau.size() - 1);
    std::size_t c = idx - 1;
    double w = (s - tau[c]) / (tau[c + 1] - tau[c]);
    return mesh.node(c) + w * (mesh.node(c + 1) - mesh.node(c));
}

TauMap build_tau(const FundamentalPair& pair, const Mesh& mesh) {
    if (!pair.y1.mesh.same_as(mesh)) {
        throw std::invalid_argument("fundamental pair lives on a different mesh");
    }
    std::vector<double> tau(mesh.node_count(), 0.0);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double inc = simpson_cell(pair, c, [&](std::size_t i) {
            return 1.0 / (pair.sub_y1[i] * pair.sub_y1[i]);
        });
        if (!(inc > 0.0)) throw std::logic_error("change of variable is not increasing");
        tau[c + 1] = tau[c] + inc;
    }
    double total = tau.back();
    if (std::abs(total - 1.0) > 1e-8) {
        throw std::logic_error("change of variable failed normalization");
    }
    for (double& v : tau) v /= total;
    tau.front() = 0.0;
    tau.back() = 1.0;
    for (std::size_t i = 1; i < tau.size(); ++i) {
        if (!(tau[i] > tau[i - 1])) {
            throw std::logic_error("change of variable is not increasing");
        }
    }
    return TauMap{mesh, std::move(tau)};
}

PushedCoefficients pushforward(const PiecewiseConstant& p, const GeneralizedFunction& r,
                               const FundamentalPair& pair, const TauMap& tau,
                               const Mesh& mesh) {
    if (!tau.mesh.same_as(mesh)) {
        throw std::invalid_argument("tau lives on a different mesh");
    }
    Mesh mesh_hat{std::vector<double>(tau.tau)};
    PiecewiseConstant p_hat(mesh_hat, p.values);

    const auto& w = r.primitive().values;
    std::vector<double> w_hat(mesh.node_count(), 0.0);
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double density = (w[c + 1] - w[c]) / mesh.cell_width(c);
        double inc = density * simpson_cell(pair, c, [&](std::size_t i) {
                         return pair.sub_y1[i] * pair.sub_y1[i];
                     });
        w_hat[c + 1] = w_hat[c] + inc;
    }
    std::vector<Atom> atoms_hat;
    for (const Atom& a : r.atoms()) {
        std::size_t i = *mesh.find_node(a.location);
        double y1 = pair.y1.values[i];
        atoms_hat.push_back({tau.tau[i], y1 * y1 * a.mass});
    }
    GeneralizedFunction r_hat(PiecewiseLinear(mesh_hat, std::move(w_hat)),
                              std::move(atoms_hat));
    return PushedCoefficients{mesh_hat, std::move(p_hat), std::move(r_hat)};
}

BoundarySpec transformed_bc(const FundamentalPair& pair, double omega1, BcKind kind) {
    switch (kind) {
        case BcKind::DirichletDirichlet:
        case BcKind::NeumannDirichlet:
            return BoundarySpec::canonical(kind);
        case BcKind::NeumannNeumann: {
            double c = pair.y2_end() / pair.y1_end() + omega1;
            if (!(c > 0.0)) {
                throw std::runtime_error(
                    "transformed boundary constant is not positive (invalid shift or "
                    "integration failure)");
            }
            // the form coefficient in the image variables carries the Jacobian
            // of the scaling map at t = 1: the image quasi-derivative is
            // Y1(1) [p y'](1) - [p Y1'](1) y(1)
            double y1e = pair.y1_end();
            return BoundarySpec::canonical(BcKind::RobinRight, c * y1e * y1e);
        }
        default:
            throw std::invalid_argument("unsupported kind for the transformed condition");
    }
}

PiecewiseLinear apply_scaling(const PiecewiseLinear& y, const FundamentalPair& pair,
                              const TauMap& tau, const Mesh& mesh_hat) {
    if (!y.mesh.same_as(tau.mesh)) {
        throw std::invalid_argument("shapes do not match");
    }
    std::vector<double> vals(y.values.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        vals[i] = y.values[i] / pair.y1.values[i];
    }
    return PiecewiseLinear(mesh_hat, std::move(vals));
}

namespace {

GeneralizedFunction with_endpoint_atoms(const GeneralizedFunction& q, double mass0,
                                        double mass1) {
    if (mass0 == 0.0 && mass1 == 0.0) return q;
    std::vector<Atom> atoms = q.atoms();
    auto bump = [&](double loc, double mass) {
        if (mass == 0.0) return;
        for (Atom& a : atoms) {
            if (a.location == loc) {
                a.mass += mass;
                return;
            }
        }
        atoms.push_back({loc, mass});
    };
    bump(0.0, mass0);
    bump(1.0, mass1);
    return GeneralizedFunction(q.primitive(), std::move(atoms));
}

}  // namespace

TransformResult eliminate_potential(const Problem& problem, const SolverOptions& opts,
                                    double c_init, int substeps) {
    Problem work = problem;
    bool reflected = false;
    if (work.bc.kind == BcKind::DirichletNeumann) {
        work = reflect(work);
        reflected = true;
    }
    if (work.bc.kind == BcKind::RobinRight) {
        throw std::invalid_argument("potential elimination expects a canonical kind");
    }
    // fold any remaining boundary V entries into endpoint atoms
    if (work.bc.v00 != 0.0 || work.bc.v11 != 0.0) {
        work.q = with_endpoint_atoms(work.q, work.bc.dirichlet_left() ? 0.0 : work.bc.v00,
                                     work.bc.dirichlet_right() ? 0.0 : work.bc.v11);
        work.bc.v00 = 0.0;
        work.bc.v11 = 0.0;
    }
    if (!validate_weight(work.r, work.mesh)) {
        throw std::runtime_error("weight does not satisfy the cell support rule");
    }

    DiscretePencil disc = assemble(work);
    double xi = positivity_shift(disc, opts);
    ShiftedPrimitive omega = shifted_primitive(work.q, work.r, xi, work.mesh);
    FundamentalPair pair = solve_fundamental(work.p, omega, work.bc.kind, c_init, substeps);
    WeakSolutionCheck check = verify_weak_solution(pair, work, omega);
    TauMap tau = build_tau(pair, work.mesh);
    PushedCoefficients pushed = pushforward(work.p, work.r, pair, tau, work.mesh);
    BoundarySpec bc_hat = transformed_bc(pair, omega.omega1, work.bc.kind);

    Problem transformed{pushed.mesh_hat, std::move(pushed.p_hat),
                        GeneralizedFunction::zero(pushed.mesh_hat), std::move(pushed.r_hat),
                        bc_hat};

    return TransformResult{std::move(work),
                           reflected,
                           xi,
                           std::move(omega),
                           std::move(pair),
                           std::move(tau),
                           std::move(transformed),
                           check.max_residual,
                           check.robin_constant};
}

}  // namespace slp
