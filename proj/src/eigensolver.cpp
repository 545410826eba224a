#include "slp/eigensolver.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "slp/tridiag.hpp"

namespace slp {

bool is_positive_definite(const SymTridiagonal& t) {
    double d = 0.0;
    for (std::size_t i = 0; i < t.size(); ++i) {
        double a = t.diag[i];
        if (i > 0) a -= t.off[i - 1] * t.off[i - 1] / d;
        if (!(a > 0.0)) return false;
        d = a;
    }
    return true;
}

namespace {

void require_spd_weight(const DiscretePencil& disc) {
    if (!is_positive_definite(disc.m_r)) {
        throw std::runtime_error(
            "weight matrix is not positive definite (weight validation failed upstream)");
    }
}

}  // namespace

Inertia inertia(const DiscretePencil& disc, double lambda) {
    SymTridiagonal t = disc.at(lambda);
    const std::size_t n = t.size();
    double scale = t.inf_norm();
    double pivmin = std::max(1e-14 * scale, std::numeric_limits<double>::min());

    Inertia in;
    double d = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double a = t.diag[i];
        if (i > 0) a -= t.off[i - 1] * t.off[i - 1] / d;
        if (std::abs(a) < pivmin) {
            ++in.zero;
            d = (a < 0.0) ? -pivmin : pivmin;
        } else {
            if (a < 0.0) ++in.below;
            else ++in.above;
            d = a;
        }
    }
    return in;
}

namespace {

int count_below(const DiscretePencil& disc, double lambda) {
    return inertia(disc, lambda).below;
}

}  // namespace

std::vector<double> eigenvalues(const DiscretePencil& disc, int count,
                                const SolverOptions& opts) {
    if (count < 1 || static_cast<std::size_t>(count) > disc.dof_count()) {
        throw std::invalid_argument("eigenvalue count out of range");
    }
    require_spd_weight(disc);

    double lo = -1.0;
    for (int guard = 0; count_below(disc, lo) > 0; ++guard) {
        if (guard > 600) throw std::runtime_error("failed to bracket the spectrum from below");
        lo *= 4.0;
    }
    double hi = 1.0;
    for (int guard = 0; count_below(disc, hi) < count; ++guard) {
        if (guard > 600) throw std::runtime_error("failed to bracket the spectrum from above");
        hi *= 4.0;
    }

    std::vector<double> lams(count);
    double left = lo;
    for (int k = 1; k <= count; ++k) {
        double a = left, b = hi;
        // invariant: count_below(a) < k <= count_below(b)
        while (b - a > opts.bisect_tol * std::max(1.0, 0.5 * (std::abs(a) + std::abs(b)))) {
            double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;  // double resolution reached
            if (count_below(disc, mid) < k) a = mid;
            else b = mid;
        }
        lams[k - 1] = 0.5 * (a + b);
        left = a;
    }
    return lams;
}

double m_inner(const DiscretePencil& disc, const std::vector<double>& x,
               const std::vector<double>& y) {
    return disc.m_r.inner(x, y);
}

double m_norm(const DiscretePencil& disc, const std::vector<double>& x) {
    return std::sqrt(std::max(0.0, m_inner(disc, x, x)));
}

EigenPair eigenfunction(const DiscretePencil& disc, double lambda_n,
                        const SolverOptions& opts) {
    require_spd_weight(disc);
    const std::size_t n = disc.dof_count();

    double delta = 0.5 * opts.bisect_tol * std::max(1.0, std::abs(lambda_n));
    TridiagLU lu(disc.at(lambda_n + delta));
    SymTridiagonal a_n = disc.at(lambda_n);
    double a_scale = std::max(a_n.inf_norm(), std::numeric_limits<double>::min());

    // deterministic start: x(1-x) at the dof nodes
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        double x = disc.mesh.node(disc.first_dof + i);
        v[i] = x * (1.0 - x);
    }
    double nrm = m_norm(disc, v);
    if (nrm == 0.0) throw std::runtime_error("degenerate start vector");
    for (double& c : v) c /= nrm;

    // residual scaled by the matrix norm: ||A(l) v||_2 / (||A(l)||_inf ||v||_2),
    // a mesh-independent measure (the M-norm floor grows with refinement)
    double res = std::numeric_limits<double>::infinity();
    double thresh = opts.residual_tol;
    for (int it = 0; it < opts.max_iterations; ++it) {
        std::vector<double> z = lu.solve(disc.m_r.apply(v));
        double zn = m_norm(disc, z);
        if (!(zn > 0.0) || !std::isfinite(zn)) {
            throw std::runtime_error("inverse iteration produced a degenerate vector");
        }
        for (double& c : z) c /= zn;
        v = std::move(z);

        std::vector<double> rvec = a_n.apply(v);
        double r2 = 0.0, v2 = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            r2 += rvec[i] * rvec[i];
            v2 += v[i] * v[i];
        }
        res = std::sqrt(r2) / (a_scale * std::sqrt(v2));
        if (res <= thresh) break;
    }
    if (res > thresh) {
        std::ostringstream msg;
        msg << "inverse iteration did not converge: residual " << res << " > " << thresh;
        throw std::runtime_error(msg.str());
    }

    double amax = 0.0;
    for (double c : v) amax = std::max(amax, std::abs(c));
    for (double c : v) {
        if (std::abs(c) > 1e-12 * amax) {
            if (c < 0.0) {
                for (double& w : v) w = -w;
            }
            break;
        }
    }

    EigenPair pair{0, lambda_n, disc.expand(v), res};
    return pair;
}

std::vector<EigenPair> eigenpairs(const DiscretePencil& disc, int count,
                                  const SolverOptions& opts) {
    std::vector<double> lams = eigenvalues(disc, count, opts);
    std::vector<EigenPair> pairs;
    pairs.reserve(lams.size());
    for (std::size_t k = 0; k < lams.size(); ++k) {
        EigenPair p = eigenfunction(disc, lams[k], opts);
        p.index = static_cast<int>(k) + 1;
        pairs.push_back(std::move(p));
    }
    return pairs;
}

double positivity_shift(const DiscretePencil& disc, const SolverOptions& opts) {
    double lambda1 = eigenvalues(disc, 1, opts)[0];
    double xi = lambda1 - 1.0;
    Inertia in = inertia(disc, xi);
    if (in.below != 0 || in.zero != 0) {
        throw std::logic_error("positivity shift check failed below lambda_1");
    }
    return xi;
}

}  // namespace slp
