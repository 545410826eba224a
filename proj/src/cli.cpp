#include "slp/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "slp/config.hpp"
#include "slp/oscillation.hpp"
#include "slp/rng.hpp"
#include "slp/transform.hpp"

namespace slp::cli {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << content;
}

void write_json(const std::filesystem::path& path, const ordered_json& j) {
    write_file(path, j.dump(2) + "\n");
}

struct Context {
    ProblemConfig cfg;
    Problem problem;
    std::filesystem::path out;
    SolverOptions opts;
};

double rel_delta(double reference, double value) {
    double d = std::abs(value - reference);
    return std::abs(reference) > 1e-9 ? d / std::abs(reference) : d;
}

bool cmd_solve(const Context& ctx) {
    DiscretePencil disc = assemble(ctx.problem);
    if (!validate_weight(ctx.problem.r, ctx.problem.mesh)) {
        throw std::runtime_error("weight does not satisfy the cell support rule");
    }
    std::vector<EigenPair> pairs = eigenpairs(disc, ctx.cfg.solver_count, ctx.opts);

    bool pass = true;
    for (std::size_t k = 1; k < pairs.size(); ++k) {
        double gap = pairs[k].lambda - pairs[k - 1].lambda;
        double width = ctx.opts.bisect_tol * std::max(1.0, std::abs(pairs[k].lambda));
        if (!(gap > 10.0 * width)) pass = false;  // spectrum must be simple
    }

    std::string csv = "index,lambda\n";
    for (const EigenPair& p : pairs) {
        csv += std::to_string(p.index) + "," + fmt17(p.lambda) + "\n";
    }
    write_file(ctx.out / "eigenvalues.csv", csv);

    std::string fcsv = "x";
    for (const EigenPair& p : pairs) fcsv += ",y" + std::to_string(p.index);
    fcsv += "\n";
    for (std::size_t i = 0; i < ctx.problem.mesh.node_count(); ++i) {
        fcsv += fmt17(ctx.problem.mesh.node(i));
        for (const EigenPair& p : pairs) fcsv += "," + fmt17(p.vector.values[i]);
        fcsv += "\n";
    }
    write_file(ctx.out / "eigenfunctions.csv", fcsv);
    return pass;
}

bool cmd_transform(const Context& ctx) {
    TransformResult tr = eliminate_potential(ctx.problem, ctx.opts);

    int count = ctx.cfg.solver_count;
    std::vector<double> lams = eigenvalues(assemble(tr.source), count, ctx.opts);
    std::vector<double> mus = eigenvalues(assemble(tr.transformed), count, ctx.opts);

    ordered_json spectral = ordered_json::array();
    double max_rel = 0.0;
    for (int k = 0; k < count; ++k) {
        double back = mus[static_cast<std::size_t>(k)] + tr.xi;
        double rd = rel_delta(lams[static_cast<std::size_t>(k)], back);
        max_rel = std::max(max_rel, rd);
        spectral.push_back({{"n", k + 1},
                            {"lambda", lams[static_cast<std::size_t>(k)]},
                            {"lambda_transformed", back},
                            {"rel_delta", rd}});
    }

    bool pass = max_rel <= ctx.cfg.invariance_tol && tr.identity_residual <= 1e-6;
    if (tr.robin_constant && !(*tr.robin_constant > 0.0)) pass = false;

    ordered_json j;
    j["kind"] = to_string(tr.source.bc.kind);
    j["reflected"] = tr.reflected;
    j["xi"] = tr.xi;
    j["c_init"] = tr.pair.c_init;
    j["robin_constant"] = tr.robin_constant ? ordered_json(*tr.robin_constant)
                                            : ordered_json(nullptr);
    j["robin_form_coefficient"] = tr.transformed.bc.kind == BcKind::RobinRight
                                      ? ordered_json(tr.transformed.bc.robin_c)
                                      : ordered_json(nullptr);
    j["identity_residual"] = tr.identity_residual;
    j["min_y1"] = tr.pair.min_y1;
    j["min_y1_small"] = tr.pair.min_y1 < 1e-6;  // ill-conditioning flag
    j["tau"] = tr.tau.tau;
    j["spectral_invariance"] = spectral;
    j["spectral_invariance_max_rel"] = max_rel;
    j["pass"] = pass;
    write_json(ctx.out / "transform.json", j);
    return pass;
}

bool cmd_oscillate(const Context& ctx) {
    DiscretePencil disc = assemble(ctx.problem);
    std::vector<EigenPair> pairs = eigenpairs(disc, ctx.cfg.solver_count, ctx.opts);

    bool pass = true;
    ordered_json modes = ordered_json::array();
    for (const EigenPair& p : pairs) {
        OscillationReport rep = analyze(p.vector, ctx.cfg.eps_scales, ctx.cfg.ztol);
        bool ok = rep.sign_changes == p.index - 1 &&
                  rep.zero_components_interior == p.index - 1;
        pass &= ok;
        ordered_json pz = ordered_json::array();
        for (const auto& [eps, cnt] : rep.pseudo_zeros) {
            pz.push_back({{"eps", eps}, {"count", cnt}});
        }
        modes.push_back({{"n", p.index},
                         {"lambda", p.lambda},
                         {"sign_changes", rep.sign_changes},
                         {"zero_components_interior", rep.zero_components_interior},
                         {"pseudo_zeros", pz},
                         {"expected", p.index - 1},
                         {"pass", ok}});
    }

    ordered_json inter = ordered_json::array();
    for (std::size_t k = 0; k + 1 < pairs.size(); ++k) {
        bool ok = interlaced(pairs[k].vector, pairs[k + 1].vector, ctx.cfg.ztol);
        pass &= ok;
        inter.push_back({{"n", pairs[k].index}, {"pass", ok}});
    }

    ordered_json j;
    j["count"] = ctx.cfg.solver_count;
    j["modes"] = modes;
    j["interlacing"] = inter;
    j["pass"] = pass;
    write_json(ctx.out / "oscillation.json", j);
    return pass;
}

bool cmd_chebyshev(const Context& ctx) {
    DiscretePencil disc = assemble(ctx.problem);
    int nmax = ctx.cfg.chebyshev_max;
    std::vector<EigenPair> pairs = eigenpairs(disc, nmax, ctx.opts);

    bool pass = true;
    ordered_json blocks = ordered_json::array();
    for (int n = 1; n <= nmax; ++n) {
        for (int N = n; N <= nmax; ++N) {
            int failures = 0;
            ordered_json trials = ordered_json::array();
            for (int trial = 0; trial < ctx.cfg.trials; ++trial) {
                std::uint64_t stream = (static_cast<std::uint64_t>(n) << 40) |
                                       (static_cast<std::uint64_t>(N) << 20) |
                                       static_cast<std::uint64_t>(trial);
                Rng rng(Rng::derive(ctx.cfg.seed, stream));
                std::vector<double> alpha(static_cast<std::size_t>(N - n + 1));
                for (double& a : alpha) a = rng.normal();
                // the bounds are driven by the outermost coefficients
                while (std::abs(alpha.front()) < 1e-3) alpha.front() = rng.normal();
                while (std::abs(alpha.back()) < 1e-3) alpha.back() = rng.normal();

                ChebyshevOutcome out =
                    chebyshev_check(pairs, alpha, n, N, ctx.cfg.eps_scales, ctx.cfg.ztol);
                bool ok = out.lower_ok && out.upper_ok;
                if (!ok) ++failures;
                trials.push_back({{"alpha", alpha},
                                  {"sign_changes", out.sign_changes},
                                  {"zero_components_interior", out.zero_components_interior},
                                  {"pass", ok}});
            }
            pass &= failures == 0;
            blocks.push_back({{"n", n},
                              {"N", N},
                              {"trials", ctx.cfg.trials},
                              {"failures", failures},
                              {"detail", trials}});
        }
    }

    ordered_json j;
    j["n_max"] = nmax;
    j["seed"] = ctx.cfg.seed;
    j["pairs"] = blocks;
    j["pass"] = pass;
    write_json(ctx.out / "chebyshev.json", j);
    return pass;
}

bool cmd_regularity(const Context& ctx) {
    bool transformed = false;
    DiscretePencil disc = [&] {
        bool direct = ctx.problem.q.is_zero() &&
                      (ctx.problem.bc.kind == BcKind::DirichletDirichlet ||
                       ctx.problem.bc.kind == BcKind::NeumannDirichlet ||
                       ctx.problem.bc.kind == BcKind::RobinRight);
        if (direct) return assemble(ctx.problem);
        transformed = true;
        return assemble(eliminate_potential(ctx.problem, ctx.opts).transformed);
    }();

    RegularityReport rep = regularity_probe(disc, ctx.cfg.trials, ctx.cfg.seed,
                                            ctx.cfg.eps_scales);

    ordered_json j;
    j["trials"] = rep.trials;
    j["seed"] = ctx.cfg.seed;
    j["transformed_first"] = transformed;
    j["eps_scales"] = rep.eps_scales;
    j["violations_r"] = rep.violations_r;
    j["violations_r2"] = rep.violations_r2;
    if (rep.worst) {
        j["worst"] = {{"trial", rep.worst->trial},
                      {"power", rep.worst->power},
                      {"eps", rep.worst->eps},
                      {"pseudo_zeros", rep.worst->pseudo_zeros},
                      {"sign_changes", rep.worst->sign_changes}};
    } else {
        j["worst"] = nullptr;
    }
    j["pass"] = rep.pass();
    write_json(ctx.out / "regularity.json", j);
    return rep.pass();
}

}  // namespace

int run(const std::string& command, const std::string& config_path,
        const std::string& out_dir, const Overrides& overrides) {
    ProblemConfig cfg;
    try {
        cfg = parse_config_file(config_path);
        if (overrides.seed) cfg.seed = *overrides.seed;
        if (overrides.cells) {
            if (*overrides.cells < 1) throw ConfigError(0, "cells", "must be >= 1");
            cfg.mesh_cells = *overrides.cells;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }

    try {
        Context ctx{cfg, build_problem(cfg), out_dir,
                    SolverOptions{1e-12, cfg.solver_tol, 100}};
        std::filesystem::create_directories(ctx.out);

        bool pass = true;
        auto dispatch = [&](const std::string& name) {
            if (name == "solve") return cmd_solve(ctx);
            if (name == "transform") return cmd_transform(ctx);
            if (name == "oscillate") return cmd_oscillate(ctx);
            if (name == "chebyshev") return cmd_chebyshev(ctx);
            if (name == "regularity") return cmd_regularity(ctx);
            throw ConfigError(0, "command", "unknown command '" + name + "'");
        };
        if (command == "all") {
            for (const char* name : {"solve", "transform", "oscillate", "chebyshev",
                                     "regularity"}) {
                pass &= dispatch(name);
            }
        } else {
            pass = dispatch(command);
        }
        return pass ? 0 : 1;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
}

}  // namespace slp::cli
