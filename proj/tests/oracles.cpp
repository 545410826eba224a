#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace oracle {

using slp::Atom;
using slp::PiecewiseLinear;
using slp::Problem;

double form_value(const Problem& pr, double lambda, const PiecewiseLinear& y) {
    const slp::Mesh& mesh = pr.mesh;
    double total = 0.0;
    const auto& wq = pr.q.primitive().values;
    const auto& wr = pr.r.primitive().values;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double h = mesh.cell_width(c);
        double yl = y.values[c], yr = y.values[c + 1];
        double dy = (yr - yl) / h;
        double int_y2 = h * (yl * yl + yl * yr + yr * yr) / 3.0;
        double dq = (wq[c + 1] - wq[c]) / h;
        double dr = (wr[c + 1] - wr[c]) / h;
        total += pr.p.in_cell(c) * dy * dy * h + (dq - lambda * dr) * int_y2;
    }
    for (const Atom& a : pr.q.atoms()) {
        double v = y.values[*mesh.find_node(a.location)];
        total += a.mass * v * v;
    }
    for (const Atom& a : pr.r.atoms()) {
        double v = y.values[*mesh.find_node(a.location)];
        total -= lambda * a.mass * v * v;
    }
    double y0 = y.values.front(), y1 = y.values.back();
    if (!pr.bc.dirichlet_left()) total += pr.bc.v00 * y0 * y0;
    if (!pr.bc.dirichlet_right()) total += pr.bc.v11 * y1 * y1;
    if (pr.bc.kind == slp::BcKind::RobinRight) total += pr.bc.robin_c * y1 * y1;
    return total;
}

namespace {

// negative-pivot count of (T - lambda I) for the FD matrix: constant
// off-diagonal `off`, diagonal entries `diag`
int fd_count_below(const std::vector<double>& diag, double off, double lambda) {
    int cnt = 0;
    double d = 1.0;
    const double tiny = 1e-300;
    bool first = true;
    for (double a : diag) {
        double piv = a - lambda - (first ? 0.0 : off * off / d);
        first = false;
        if (piv == 0.0) piv = tiny;
        if (piv < 0.0) ++cnt;
        d = piv;
    }
    return cnt;
}

}  // namespace

std::vector<double> fd_dirichlet_delta_eigenvalues(
    const std::vector<std::pair<double, double>>& atoms, int cells, int count) {
    const int n = cells - 1;  // interior points
    const double h = 1.0 / cells;
    std::vector<double> diag(static_cast<std::size_t>(n), 2.0 / (h * h));
    const double off = -1.0 / (h * h);
    for (const auto& [loc, mass] : atoms) {
        int j = static_cast<int>(std::lround(loc / h));
        if (j < 1 || j > n) throw std::invalid_argument("atom outside the interior grid");
        diag[static_cast<std::size_t>(j - 1)] += mass / h;
    }

    double lo = -1.0;
    while (fd_count_below(diag, off, lo) > 0) lo *= 4.0;
    double hi = 1.0;
    while (fd_count_below(diag, off, hi) < count) hi *= 4.0;

    std::vector<double> out(static_cast<std::size_t>(count));
    for (int k = 1; k <= count; ++k) {
        double a = lo, b = hi;
        while (b - a > 1e-10 * std::max(1.0, std::abs(a) + std::abs(b))) {
            double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            if (fd_count_below(diag, off, mid) < k) a = mid;
            else b = mid;
        }
        out[static_cast<std::size_t>(k - 1)] = 0.5 * (a + b);
    }
    return out;
}

namespace {

// exact minimum of |f| over [a, b]
double min_abs_on(const PiecewiseLinear& f, double a, double b) {
    const slp::Mesh& mesh = f.mesh;
    double best = std::numeric_limits<double>::infinity();
    std::size_t c0 = mesh.locate(a);
    std::size_t c1 = mesh.locate(b);
    for (std::size_t c = c0; c <= c1; ++c) {
        double xl = std::max(a, mesh.node(c));
        double xr = std::min(b, mesh.node(c + 1));
        if (!(xr >= xl)) continue;
        double vl = evaluate(f, xl), vr = evaluate(f, xr);
        if ((vl > 0.0 && vr < 0.0) || (vl < 0.0 && vr > 0.0)) return 0.0;
        best = std::min(best, std::min(std::abs(vl), std::abs(vr)));
    }
    return best;
}

}  // namespace

int pseudo_zeros_exhaustive(const PiecewiseLinear& f, double eps) {
    const slp::Mesh& mesh = f.mesh;

    // breakpoints where |f| can cross eps, plus all nodes
    std::vector<double> pts;
    for (std::size_t c = 0; c < mesh.cell_count(); ++c) {
        double xl = mesh.node(c), xr = mesh.node(c + 1);
        double vl = f.values[c], vr = f.values[c + 1];
        pts.push_back(xl);
        for (double level : {eps, -eps}) {
            if ((vl < level) != (vr < level)) {
                double x = xl + (level - vl) * (xr - xl) / (vr - vl);
                if (x > xl && x < xr) pts.push_back(x);
            }
        }
    }
    pts.push_back(1.0);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

    // one candidate per interval on which |f| stays above eps
    std::vector<double> cand;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        double m = 0.5 * (pts[i] + pts[i + 1]);
        if (std::abs(evaluate(f, m)) > eps && m > 0.0 && m < 1.0) cand.push_back(m);
    }
    if (cand.empty()) return 0;

    // longest admissible chain: consecutive points need a strict dip between
    std::vector<int> best(cand.size(), 1);
    int longest = 1;
    for (std::size_t i = 1; i < cand.size(); ++i) {
        for (std::size_t j = 0; j < i; ++j) {
            if (best[j] + 1 > best[i] && min_abs_on(f, cand[j], cand[i]) < eps) {
                best[i] = best[j] + 1;
            }
        }
        longest = std::max(longest, best[i]);
    }
    return longest - 1;
}

}  // namespace oracle
