#include "slp/oscillation.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "slp/rng.hpp"

namespace slp {

namespace {

/// Ordered breakpoints of the graph against the levels ±thr: every node plus
/// every interior crossing point. Between consecutive breakpoints f is linear
/// and does not cross either level.
std::vector<double> graph_breakpoints(const PiecewiseLinear& f, double thr) {
    std::vector<double> pts;
    const std::size_t cells = f.mesh.cell_count();
    pts.reserve(f.mesh.node_count() + 2 * cells);
    for (std::size_t c = 0; c < cells; ++c) {
        double xl = f.mesh.node(c), xr = f.mesh.node(c + 1);
        double vl = f.values[c], vr = f.values[c + 1];
        pts.push_back(xl);
        if (vl != vr) {
            for (double level : {thr, -thr}) {
                double t = (level - vl) / (vr - vl);
                if (t > 0.0 && t < 1.0) pts.push_back(xl + t * (xr - xl));
            }
        }
    }
    pts.push_back(f.mesh.node(f.mesh.node_count() - 1));
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

struct Segment {
    double start, end;
    double abs_min, abs_max;  // of f over the segment
    int cls;                  // -1 below thr, +1 above thr, 0 at thr
};

std::vector<Segment> classified_segments(const PiecewiseLinear& f, double thr,
                                         bool at_counts_as_below) {
    std::vector<double> pts = graph_breakpoints(f, thr);
    std::vector<Segment> segs;
    segs.reserve(pts.size());
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double s = pts[i], e = pts[i + 1];
        if (!(e > s)) continue;
        double vs = evaluate(f, s), ve = evaluate(f, e);
        bool same_sign = (vs >= 0.0 && ve >= 0.0) || (vs <= 0.0 && ve <= 0.0);
        double amin = same_sign ? std::min(std::abs(vs), std::abs(ve)) : 0.0;
        double amax = std::max(std::abs(vs), std::abs(ve));
        double vm = std::abs(evaluate(f, 0.5 * (s + e)));
        int cls;
        if (vm > thr) cls = 1;
        else if (vm < thr) cls = -1;
        else cls = at_counts_as_below ? -1 : 0;
        segs.push_back({s, e, amin, amax, cls});
    }
    return segs;
}

}  // namespace

int sign_changes(const PiecewiseLinear& f, double ztol_rel) {
    double zt = ztol_rel * f.sup_norm();
    int count = 0;
    int prev = 0;
    for (std::size_t i = 1; i + 1 < f.values.size(); ++i) {
        double v = f.values[i];
        if (std::abs(v) <= zt) continue;
        int s = v > 0.0 ? 1 : -1;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

PseudoZeroScan pseudo_zeros_scan(const PiecewiseLinear& f, double eps) {
    if (!(eps > 0.0)) throw std::domain_error("eps must be positive");
    std::vector<Segment> segs = classified_segments(f, eps, /*at_counts_as_below=*/false);

    int blocks = 0;
    double cur_peak = 0.0;
    double gap_min = 0.0;
    bool in_gap = false;
    double margin = std::numeric_limits<double>::infinity();
    auto note = [&](double m) { margin = std::min(margin, m); };

    for (const Segment& seg : segs) {
        if (seg.cls == 1) {
            if (blocks == 0) {
                blocks = 1;
                cur_peak = seg.abs_max;
            } else if (!in_gap) {
                cur_peak = std::max(cur_peak, seg.abs_max);
            } else {
                note(cur_peak - eps);
                note(eps - gap_min);
                ++blocks;
                cur_peak = seg.abs_max;
                in_gap = false;
            }
        } else if (seg.cls == -1 && blocks > 0) {
            if (!in_gap) {
                gap_min = seg.abs_min;
                in_gap = true;
            } else {
                gap_min = std::min(gap_min, seg.abs_min);
            }
        }
        // segments sitting exactly at the level contribute nothing
    }
    PseudoZeroScan scan;
    scan.count = blocks > 0 ? blocks - 1 : 0;
    if (scan.count > 0) {
        note(cur_peak - eps);
        scan.margin = std::max(0.0, margin);
    }
    return scan;
}

ZeroComponents zero_components(const PiecewiseLinear& f, double ztol) {
    if (!(ztol > 0.0)) throw std::domain_error("ztol must be positive");
    std::vector<Segment> segs = classified_segments(f, ztol, /*at_counts_as_below=*/true);

    ZeroComponents zc;
    bool open = false;
    double comp_start = 0.0, comp_end = 0.0;
    auto close = [&]() {
        if (!open) return;
        bool left = comp_start == 0.0;
        bool right = comp_end == 1.0;
        zc.touches_left |= left;
        zc.touches_right |= right;
        if (!left && !right) {
            ++zc.interior;
            zc.interior_locations.push_back(0.5 * (comp_start + comp_end));
        }
        open = false;
    };
    for (const Segment& seg : segs) {
        if (seg.cls <= 0) {
            if (open && seg.start == comp_end) {
                comp_end = seg.end;
            } else {
                close();
                open = true;
                comp_start = seg.start;
                comp_end = seg.end;
            }
        } else {
            close();
        }
    }
    close();
    return zc;
}

std::vector<double> zero_locations(const PiecewiseLinear& f, double ztol) {
    return zero_components(f, ztol).interior_locations;
}

OscillationReport analyze(const PiecewiseLinear& f, const std::vector<double>& eps_scales,
                          double ztol_rel) {
    OscillationReport rep;
    double sup = f.sup_norm();
    rep.ztol = ztol_rel * sup;
    rep.sign_changes = sign_changes(f, ztol_rel);
    rep.zero_components_interior =
        sup > 0.0 ? zero_components(f, rep.ztol).interior : 0;
    for (double scale : eps_scales) {
        double eps = scale * sup;
        rep.epsilons_used.push_back(eps);
        rep.pseudo_zeros[eps] = sup > 0.0 ? pseudo_zeros(f, eps) : 0;
    }
    return rep;
}

Resolvent::Resolvent(const DiscretePencil& disc)
    : disc_(disc), lu_([&] {
          if (!disc.potential_free) {
              throw std::invalid_argument("resolvent requires a potential-free pencil");
          }
          if (disc.bc.kind != BcKind::DirichletDirichlet &&
              disc.bc.kind != BcKind::NeumannDirichlet &&
              disc.bc.kind != BcKind::RobinRight) {
              throw std::invalid_argument(
                  "resolvent requires Dirichlet-Dirichlet, Neumann-Dirichlet or RobinRight "
                  "boundary conditions");
          }
          SymTridiagonal a0 = disc.at(0.0);
          if (!is_positive_definite(a0)) {
              throw std::runtime_error("A(0) is not positive definite");
          }
          return TridiagLU(a0);
      }()) {}

std::vector<double> Resolvent::apply(const std::vector<double>& y_dof) const {
    return lu_.solve(disc_.m_r.apply(y_dof));
}

PiecewiseLinear Resolvent::apply(const PiecewiseLinear& y) const {
    return disc_.expand(apply(disc_.restrict_to_dofs(y)));
}

PiecewiseLinear resolvent_apply(const DiscretePencil& disc, const PiecewiseLinear& y) {
    return Resolvent(disc).apply(y);
}

RegularityReport regularity_probe(const DiscretePencil& disc, int trials, std::uint64_t seed,
                                  const std::vector<double>& eps_scales) {
    Resolvent res(disc);
    RegularityReport rep;
    rep.trials = trials;
    rep.eps_scales = eps_scales;
    int worst_excess = 0;

    for (int trial = 0; trial < trials; ++trial) {
        Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(trial)));
        std::vector<double> y(disc.dof_count());
        double sup_y = 0.0;
        do {
            sup_y = 0.0;
            for (double& v : y) {
                v = rng.normal();
                sup_y = std::max(sup_y, std::abs(v));
            }
        } while (sup_y == 0.0);

        int sc = sign_changes(disc.expand(y));
        std::vector<double> u = y;
        for (int power = 1; power <= 2; ++power) {
            u = res.apply(u);
            PiecewiseLinear up = disc.expand(u);
            double sup_u = up.sup_norm();
            if (sup_u == 0.0) continue;
            for (double scale : eps_scales) {
                int pz = pseudo_zeros(up, scale * sup_u);
                if (pz > sc) {
                    (power == 1 ? rep.violations_r : rep.violations_r2) += 1;
                    if (pz - sc > worst_excess) {
                        worst_excess = pz - sc;
                        rep.worst = RegularityViolation{trial, power, scale * sup_u, pz, sc};
                    }
                }
            }
        }
    }
    return rep;
}

PowerIterationResult power_iteration(const DiscretePencil& disc, const PiecewiseLinear& y0,
                                     const std::vector<EigenPair>& pairs, int n_target,
                                     int steps, double target_err) {
    if (n_target < 1 || static_cast<std::size_t>(n_target) > pairs.size()) {
        throw std::invalid_argument("target index out of range");
    }
    Resolvent res(disc);
    std::vector<double> target = disc.restrict_to_dofs(pairs[n_target - 1].vector);
    double tn = m_norm(disc, target);
    for (double& v : target) v /= tn;

    std::vector<double> z = disc.restrict_to_dofs(y0);
    double zn = m_norm(disc, z);
    if (!(zn > 0.0)) throw std::invalid_argument("start vector is degenerate");
    for (double& v : z) v /= zn;

    PowerIterationResult out;
    for (int m = 1; m <= steps; ++m) {
        z = res.apply(z);
        double nrm = m_norm(disc, z);
        if (!(nrm > 0.0) || !std::isfinite(nrm)) {
            throw std::runtime_error("power iteration produced a degenerate vector");
        }
        for (double& v : z) v /= nrm;

        double dplus = 0.0, dminus = 0.0;
        {
            std::vector<double> a(z.size()), b(z.size());
            for (std::size_t i = 0; i < z.size(); ++i) {
                a[i] = z[i] - target[i];
                b[i] = z[i] + target[i];
            }
            dplus = m_norm(disc, a);
            dminus = m_norm(disc, b);
        }
        double err = std::min(dplus, dminus);
        out.iterates.push_back(disc.expand(z));
        out.errors.push_back(err);
        if (out.converged_step < 0 && err <= target_err) out.converged_step = m;
    }
    if (out.converged_step < 0) {
        std::ostringstream msg;
        msg << "power iteration stagnated: error " << out.errors.back() << " after " << steps
            << " steps";
        throw std::runtime_error(msg.str());
    }
    return out;
}

ChebyshevOutcome chebyshev_check(const std::vector<EigenPair>& pairs,
                                 const std::vector<double>& alpha, int n, int N,
                                 const std::vector<double>& eps_scales, double ztol_rel) {
    if (n < 1 || n > N || static_cast<std::size_t>(N) > pairs.size()) {
        throw std::invalid_argument("index range out of bounds");
    }
    if (alpha.size() != static_cast<std::size_t>(N - n + 1)) {
        throw std::invalid_argument("coefficient count does not match the index range");
    }
    bool any = false;
    for (double a : alpha) any |= (a != 0.0);
    if (!any) throw std::invalid_argument("all-zero coefficient vector");

    const Mesh& mesh = pairs[static_cast<std::size_t>(n) - 1].vector.mesh;
    std::vector<double> vals(mesh.node_count(), 0.0);
    for (int k = n; k <= N; ++k) {
        const auto& v = pairs[static_cast<std::size_t>(k) - 1].vector.values;
        double a = alpha[static_cast<std::size_t>(k - n)];
        for (std::size_t i = 0; i < vals.size(); ++i) vals[i] += a * v[i];
    }
    PiecewiseLinear y(mesh, std::move(vals));

    ChebyshevOutcome out;
    double sup = y.sup_norm();
    out.sign_changes = sign_changes(y, ztol_rel);
    out.zero_components_interior =
        sup > 0.0 ? zero_components(y, ztol_rel * sup).interior : 0;
    for (double scale : eps_scales) {
        if (sup > 0.0) out.pseudo_zeros[scale * sup] = pseudo_zeros(y, scale * sup);
    }
    out.lower_ok = out.sign_changes >= n - 1;
    out.upper_ok = out.zero_components_interior <= N - 1;
    return out;
}

bool interlaced(const PiecewiseLinear& y_prev, const PiecewiseLinear& y_next,
                double ztol_rel) {
    std::vector<double> hi = zero_locations(y_next, ztol_rel * y_next.sup_norm());
    std::vector<double> lo = zero_locations(y_prev, ztol_rel * y_prev.sup_norm());
    if (hi.size() != lo.size() + 1) return false;
    for (std::size_t i = 0; i < lo.size(); ++i) {
        if (!(hi[i] < lo[i] && lo[i] < hi[i + 1])) return false;
    }
    return true;
}

}  // namespace slp
