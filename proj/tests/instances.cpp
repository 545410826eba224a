#include "instances.hpp"

#include <cmath>

#include "slp/rng.hpp"

namespace testinst {

using namespace slp;

Problem make_instance(int k, int cells) {
    Rng rng(Rng::derive(kCorpusSeed, static_cast<std::uint64_t>(k)));

    BcKind kind;
    switch (k % 3) {
        case 0: kind = BcKind::DirichletDirichlet; break;
        case 1: kind = BcKind::NeumannDirichlet; break;
        default: kind = BcKind::NeumannNeumann; break;
    }

    std::vector<double> p8(8);
    for (double& v : p8) v = rng.uniform(0.5, 2.0);

    auto draw_locations = [&](int n, std::vector<double>& taken) {
        std::vector<double> locs;
        while (static_cast<int>(locs.size()) < n) {
            double x = rng.uniform(0.05, 0.95);
            bool clash = false;
            for (double t : taken) clash |= std::abs(t - x) < 1e-3;
            if (!clash) {
                locs.push_back(x);
                taken.push_back(x);
            }
        }
        return locs;
    };

    std::vector<double> taken;
    int nq = rng.uniform_int(0, 3);
    std::vector<double> q_locs = draw_locations(nq, taken);
    std::vector<double> q_mass(q_locs.size());
    for (double& m : q_mass) m = rng.uniform(-5.0, 5.0);

    int nr = rng.uniform_int(0, 2);
    std::vector<double> r_locs = draw_locations(nr, taken);
    std::vector<double> r_mass(r_locs.size());
    for (double& m : r_mass) m = rng.uniform(0.0, 2.0);

    std::vector<double> required;
    for (int j = 1; j < 8; ++j) required.push_back(j / 8.0);
    for (double x : q_locs) required.push_back(x);
    for (double x : r_locs) required.push_back(x);
    Mesh mesh = build_mesh(cells, required);

    std::vector<double> pv(mesh.cell_count());
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double mid = 0.5 * (mesh.node(c) + mesh.node(c + 1));
        int piece = std::min(7, static_cast<int>(mid * 8.0));
        pv[c] = p8[static_cast<std::size_t>(piece)];
    }

    auto snap = [&](double x) { return mesh.node(*mesh.find_node(x)); };
    std::vector<Atom> q_atoms, r_atoms;
    for (std::size_t i = 0; i < q_locs.size(); ++i) q_atoms.push_back({snap(q_locs[i]), q_mass[i]});
    for (std::size_t i = 0; i < r_locs.size(); ++i) r_atoms.push_back({snap(r_locs[i]), r_mass[i]});

    GeneralizedFunction q(PiecewiseLinear::zero(mesh), std::move(q_atoms));
    GeneralizedFunction r(PiecewiseLinear(mesh, mesh.nodes()), std::move(r_atoms));

    return Problem{mesh, PiecewiseConstant(mesh, std::move(pv)), std::move(q), std::move(r),
                   BoundarySpec::canonical(kind)};
}

}  // namespace testinst
