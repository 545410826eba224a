#include <doctest.h>

#include <cmath>

#include "slp/oscillation.hpp"
#include "slp/transform.hpp"

using namespace slp;

namespace {

constexpr double kPi = 3.14159265358979323846;

Problem constant_problem(int cells, BcKind kind, std::vector<Atom> q_atoms = {}) {
    Mesh mesh = build_mesh(cells, [&] {
        std::vector<double> req;
        for (const Atom& a : q_atoms) req.push_back(a.location);
        return req;
    }());
    for (Atom& a : q_atoms) a.location = mesh.node(*mesh.find_node(a.location));
    return Problem{mesh, PiecewiseConstant::constant(mesh, 1.0),
                   GeneralizedFunction(PiecewiseLinear::zero(mesh), std::move(q_atoms)),
                   GeneralizedFunction::lebesgue(mesh),
                   BoundarySpec::canonical(kind)};
}

ShiftedPrimitive constant_omega(const Mesh& mesh, double c) {
    ShiftedPrimitive sp{mesh, std::vector<double>(mesh.cell_count(), c),
                        std::vector<double>(mesh.cell_count(), c), c, 0.0};
    return sp;
}

}  // namespace

TEST_CASE("zero omega gives the constant fundamental pair") {
    Mesh mesh = build_mesh(16);
    PiecewiseConstant p = PiecewiseConstant::constant(mesh, 1.0);
    FundamentalPair pair = solve_fundamental(p, constant_omega(mesh, 0.0),
                                             BcKind::NeumannNeumann);
    for (double v : pair.y1.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-14));
    for (double v : pair.y2.values) CHECK(std::abs(v) <= 1e-14);

    TauMap tau = build_tau(pair, mesh);
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        CHECK(tau.tau[i] == doctest::Approx(mesh.node(i)).epsilon(1e-13));
    }
}

TEST_CASE("constant omega has the closed-form solution") {
    // constant omega c with boundary constant c is the representation of the
    // atom c delta_0; the unnormalized solution is Y1 = 1 + c t, Y2 = -c^2 t.
    const double c = 0.7;
    Mesh mesh = build_mesh(64);
    PiecewiseConstant p = PiecewiseConstant::constant(mesh, 1.0);
    FundamentalPair pair =
        solve_fundamental(p, constant_omega(mesh, c), BcKind::NeumannNeumann);

    const double k = 1.0 / std::sqrt(1.0 + c);  // normalization factor
    for (std::size_t i = 0; i < mesh.node_count(); ++i) {
        double t = mesh.node(i);
        CHECK(pair.y1.values[i] == doctest::Approx(k * (1.0 + c * t)).epsilon(1e-12));
        CHECK(pair.y2.values[i] == doctest::Approx(-k * c * c * t).epsilon(1e-10));
    }

    SUBCASE("tau follows the elementary integral") {
        TauMap tau = build_tau(pair, mesh);
        for (std::size_t i = 0; i < mesh.node_count(); ++i) {
            double t = mesh.node(i);
            double expected = (1.0 + c) * t / (1.0 + c * t);
            CHECK(tau.tau[i] == doctest::Approx(expected).epsilon(1e-10));
        }
    }
    SUBCASE("weak-solution identity holds and yields the Robin constant") {
        Problem pr = constant_problem(64, BcKind::NeumannNeumann, {{0.0, c}});
        WeakSolutionCheck check = verify_weak_solution(pair, pr, constant_omega(mesh, c));
        CHECK(check.max_residual <= 1e-12);
        REQUIRE(check.robin_constant.has_value());
        CHECK(*check.robin_constant == doctest::Approx(c / (1.0 + c)).epsilon(1e-10));
        CHECK(*check.robin_constant > 0.0);
    }
    SUBCASE("the eliminated endpoint atom reappears as the boundary coefficient") {
        BoundarySpec bc = transformed_bc(pair, c, BcKind::NeumannNeumann);
        CHECK(bc.kind == BcKind::RobinRight);
        CHECK(bc.robin_c == doctest::Approx(c).epsilon(1e-12));
    }
    SUBCASE("pushforward scales atoms by Y1^2 and preserves weighted mass") {
        TauMap tau = build_tau(pair, mesh);
        GeneralizedFunction r(PiecewiseLinear::zero(mesh), {{0.5, 1.0}});
        PushedCoefficients pushed = pushforward(p, r, pair, tau, mesh);
        REQUIRE(pushed.r_hat.atoms().size() == 1);
        double y1_half = k * (1.0 + 0.5 * c);
        CHECK(pushed.r_hat.atoms()[0].mass ==
              doctest::Approx(y1_half * y1_half).epsilon(1e-12));
        CHECK(pushed.r_hat.atoms()[0].location ==
              doctest::Approx(tau.tau[*mesh.find_node(0.5)]).epsilon(1e-14));

        GeneralizedFunction leb = GeneralizedFunction::lebesgue(mesh);
        PushedCoefficients pl = pushforward(p, leb, pair, tau, mesh);
        double mass_hat = pl.r_hat.primitive().values.back();
        double expected = k * k * (std::pow(1.0 + c, 3.0) - 1.0) / (3.0 * c);
        CHECK(mass_hat == doctest::Approx(expected).epsilon(1e-10));
    }
}

TEST_CASE("quasi-derivative identity at the substep midpoints") {
    Problem pr = constant_problem(64, BcKind::DirichletDirichlet);
    DiscretePencil disc = assemble(pr);
    double xi = positivity_shift(disc);
    ShiftedPrimitive omega = shifted_primitive(pr.q, pr.r, xi, pr.mesh);
    FundamentalPair pair = solve_fundamental(pr.p, omega, pr.bc.kind, 1.0, 64);

    double worst = 0.0;
    for (std::size_t i = 1; i + 1 < pair.sub_t.size(); ++i) {
        std::size_t cell = pr.mesh.locate(pair.sub_t[i]);
        if (pr.mesh.locate(pair.sub_t[i - 1]) != cell ||
            pr.mesh.locate(pair.sub_t[i + 1]) != cell) {
            continue;  // stay inside one smooth piece
        }
        double dy1 = (pair.sub_y1[i + 1] - pair.sub_y1[i - 1]) /
                     (pair.sub_t[i + 1] - pair.sub_t[i - 1]);
        double om = omega.in_cell(cell, pair.sub_t[i]);
        double qd = pr.p.in_cell(cell) * dy1 - om * pair.sub_y1[i];
        worst = std::max(worst, std::abs(pair.sub_y2[i] - qd));
    }
    CHECK(worst <= 1e-5);
}

TEST_CASE("Dirichlet construction self-converges under substep refinement") {
    Problem pr = constant_problem(256, BcKind::DirichletDirichlet);
    DiscretePencil disc = assemble(pr);
    double xi = positivity_shift(disc);
    CHECK(xi == doctest::Approx(kPi * kPi - 1.0).epsilon(1e-3));
    ShiftedPrimitive omega = shifted_primitive(pr.q, pr.r, xi, pr.mesh);

    FundamentalPair coarse = solve_fundamental(pr.p, omega, pr.bc.kind, 1.0, 16);
    FundamentalPair fine = solve_fundamental(pr.p, omega, pr.bc.kind, 1.0, 160);
    CHECK(coarse.c_init == 1.0);
    double worst = 0.0;
    for (std::size_t i = 0; i < coarse.y1.values.size(); ++i) {
        worst = std::max(worst, std::abs(coarse.y1.values[i] - fine.y1.values[i]));
    }
    CHECK(worst <= 1e-8);
    CHECK(coarse.min_y1 > 0.0);
}

TEST_CASE("weak-solution residual vanishes for the zero-omega case") {
    Problem pr = constant_problem(32, BcKind::NeumannNeumann);
    // xi = 0 with q = 0, r untouched by the shift: omega stays zero
    ShiftedPrimitive omega = shifted_primitive(pr.q, GeneralizedFunction::zero(pr.mesh),
                                               0.0, pr.mesh);
    FundamentalPair pair = solve_fundamental(pr.p, omega, pr.bc.kind);
    WeakSolutionCheck check = verify_weak_solution(pair, pr, omega);
    CHECK(check.max_residual <= 1e-14);
}

TEST_CASE("transformed boundary condition") {
    SUBCASE("Dirichlet kinds survive unchanged") {
        Problem pr = constant_problem(64, BcKind::DirichletDirichlet);
        TransformResult tr = eliminate_potential(pr);
        CHECK(tr.transformed.bc.kind == BcKind::DirichletDirichlet);
        CHECK_FALSE(tr.robin_constant.has_value());
    }
    SUBCASE("Neumann-Neumann becomes RobinRight with positive constant") {
        // constant-coefficient Neumann problem: lambda_1 = 0, xi = -1,
        // omega(t) = t
        Problem pr = constant_problem(64, BcKind::NeumannNeumann);
        TransformResult tr = eliminate_potential(pr);
        CHECK(tr.xi == doctest::Approx(-1.0).epsilon(1e-9));
        CHECK(tr.transformed.bc.kind == BcKind::RobinRight);
        REQUIRE(tr.robin_constant.has_value());
        CHECK(*tr.robin_constant > 0.0);
        double y1e = tr.pair.y1_end();
        CHECK(tr.transformed.bc.robin_c ==
              doctest::Approx(*tr.robin_constant * y1e * y1e).epsilon(1e-14));
    }
    SUBCASE("DirichletNeumann goes through reflection") {
        Problem pr = constant_problem(64, BcKind::DirichletNeumann, {{0.25, 2.0}});
        TransformResult tr = eliminate_potential(pr);
        CHECK(tr.reflected);
        CHECK(tr.source.bc.kind == BcKind::NeumannDirichlet);
        REQUIRE(tr.source.q.atoms().size() == 1);
        CHECK(tr.source.q.atoms()[0].location == 0.75);
    }
}

TEST_CASE("scaling map basics") {
    Mesh mesh = build_mesh(16);
    PiecewiseConstant p = PiecewiseConstant::constant(mesh, 1.0);
    FundamentalPair pair = solve_fundamental(p, constant_omega(mesh, 0.0),
                                             BcKind::NeumannNeumann);
    TauMap tau = build_tau(pair, mesh);
    Mesh mesh_hat{std::vector<double>(tau.tau)};

    PiecewiseLinear y(mesh, mesh.nodes());
    PiecewiseLinear mapped = apply_scaling(y, pair, tau, mesh_hat);
    for (std::size_t i = 0; i < y.values.size(); ++i) {
        CHECK(mapped.values[i] == doctest::Approx(y.values[i]).epsilon(1e-13));
    }

    PiecewiseLinear ratio = apply_scaling(pair.y1, pair, tau, mesh_hat);
    for (double v : ratio.values) CHECK(v == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("spectral invariance and eigenfunction mapping at scale") {
    Problem pr = constant_problem(2000, BcKind::DirichletDirichlet, {{0.5, 10.0}});
    TransformResult tr = eliminate_potential(pr);
    CHECK(tr.identity_residual <= 1e-6);

    DiscretePencil disc = assemble(tr.source);
    DiscretePencil disc_hat = assemble(tr.transformed);
    CHECK(disc_hat.potential_free);

    std::vector<double> lams = eigenvalues(disc, 5);
    std::vector<double> mus = eigenvalues(disc_hat, 5);
    for (int k = 0; k < 5; ++k) {
        double mapped = mus[k] + tr.xi;
        CHECK(std::abs(mapped - lams[k]) / std::abs(lams[k]) <= 1e-3);
    }

    // S carries eigenfunctions onto eigenfunctions
    EigenPair y1 = eigenfunction(disc, lams[0]);
    EigenPair y1_hat = eigenfunction(disc_hat, mus[0]);
    PiecewiseLinear mapped = apply_scaling(y1.vector, tr.pair, tr.tau,
                                           tr.transformed.mesh);

    auto normalize_sup = [](std::vector<double> v) {
        double sup = 0.0;
        std::size_t arg = 0;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (std::abs(v[i]) > sup) {
                sup = std::abs(v[i]);
                arg = i;
            }
        }
        double s = v[arg] > 0.0 ? sup : -sup;
        for (double& x : v) x /= s;
        return v;
    };
    std::vector<double> a = normalize_sup(mapped.values);
    std::vector<double> b = normalize_sup(y1_hat.vector.values);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, std::abs(a[i] - b[i]));
    CHECK(worst <= 1e-3);
}

TEST_CASE("solve_fundamental rejects bad setups") {
    Mesh mesh = build_mesh(8);
    PiecewiseConstant p = PiecewiseConstant::constant(mesh, 1.0);
    CHECK_THROWS_AS(solve_fundamental(p, constant_omega(mesh, 0.0), BcKind::DirichletNeumann),
                    std::invalid_argument);
    CHECK_THROWS_AS(
        solve_fundamental(p, constant_omega(mesh, 0.0), BcKind::DirichletDirichlet, 0.0),
        std::invalid_argument);
    CHECK_THROWS_AS(solve_fundamental(p, constant_omega(mesh, 0.0), BcKind::NeumannNeumann,
                                      1.0, 6),
                    std::invalid_argument);
}

TEST_CASE("an invalid shift is detected as a conjugate point") {
    // xi far above lambda_1 makes the shifted problem indefinite
    Problem pr = constant_problem(128, BcKind::DirichletDirichlet);
    ShiftedPrimitive omega = shifted_primitive(pr.q, pr.r, 200.0, pr.mesh);
    CHECK_THROWS_WITH_AS(solve_fundamental(pr.p, omega, pr.bc.kind),
                         "conjugate point encountered", std::runtime_error);
}
