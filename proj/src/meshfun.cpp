#include "slp/meshfun.hpp"

namespace slp {

Mesh::Mesh(std::vector<double> nodes) {
    if (nodes.size() < 2) {
        throw std::invalid_argument("mesh needs at least two nodes");
    }
    if (nodes.front() != 0.0 || nodes.back() != 1.0) {
        throw std::invalid_argument("mesh endpoints must be exactly 0 and 1");
    }
    for (std::size_t i = 1; i < nodes.size(); ++i) {
        if (!(nodes[i] > nodes[i - 1])) {
            throw std::invalid_argument("mesh nodes must be strictly increasing");
        }
    }
    nodes_ = std::make_shared<const std::vector<double>>(std::move(nodes));
}

std::size_t Mesh::locate(double x) const {
    const auto& n = *nodes_;
    if (x < 0.0 || x > 1.0) {
        throw std::domain_error("point outside [0,1]");
    }
    auto it = std::upper_bound(n.begin(), n.end(), x);
    std::size_t idx = static_cast<std::size_t>(it - n.begin());
    if (idx == 0) return 0;
    if (idx >= n.size()) return n.size() - 2;
    return idx - 1;
}

std::optional<std::size_t> Mesh::find_node(double x, double tol) const {
    const auto& n = *nodes_;
    auto it = std::lower_bound(n.begin(), n.end(), x - tol);
    if (it != n.end() && std::abs(*it - x) <= tol) {
        return static_cast<std::size_t>(it - n.begin());
    }
    return std::nullopt;
}

Mesh build_mesh(int n_cells, const std::vector<double>& required_nodes) {
    if (n_cells < 1) {
        throw std::domain_error("n_cells must be >= 1");
    }
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n_cells) + 1 + required_nodes.size());
    for (int k = 0; k <= n_cells; ++k) {
        nodes.push_back(static_cast<double>(k) / n_cells);
    }
    nodes.front() = 0.0;
    nodes.back() = 1.0;

    std::vector<double> extra = required_nodes;
    std::sort(extra.begin(), extra.end());
    for (double x : extra) {
        if (x < 0.0 || x > 1.0) {
            throw std::domain_error("required node outside [0,1]");
        }
        auto it = std::lower_bound(nodes.begin(), nodes.end(), x);
        // merge toward an existing node when within tolerance
        if (it != nodes.end() && std::abs(*it - x) <= kNodeTol) continue;
        if (it != nodes.begin() && std::abs(*(it - 1) - x) <= kNodeTol) continue;
        nodes.insert(it, x);
    }
    return Mesh(std::move(nodes));
}

PiecewiseLinear::PiecewiseLinear(Mesh m, std::vector<double> v)
    : mesh(std::move(m)), values(std::move(v)) {
    if (values.size() != mesh.node_count()) {
        throw std::invalid_argument("nodal value count does not match mesh");
    }
}

double PiecewiseLinear::operator()(double x) const { return evaluate(*this, x); }

double PiecewiseLinear::sup_norm() const {
    double s = 0.0;
    for (double v : values) s = std::max(s, std::abs(v));
    return s;
}

double evaluate(const PiecewiseLinear& f, double x) {
    if (x < 0.0 || x > 1.0) {
        throw std::domain_error("evaluation point outside [0,1]");
    }
    std::size_t c = f.mesh.locate(x);
    double xl = f.mesh.node(c), xr = f.mesh.node(c + 1);
    if (x == xl) return f.values[c];
    if (x == xr) return f.values[c + 1];
    double t = (x - xl) / (xr - xl);
    return f.values[c] + t * (f.values[c + 1] - f.values[c]);
}

PiecewiseConstant::PiecewiseConstant(Mesh m, std::vector<double> v)
    : mesh(std::move(m)), values(std::move(v)) {
    if (values.size() != mesh.cell_count()) {
        throw std::invalid_argument("cell value count does not match mesh");
    }
}

}  // namespace slp
