#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <vector>

namespace slp {

/// Absolute tolerance used when merging nearly coincident mesh nodes.
inline constexpr double kNodeTol = 1e-12;

/// Partition of [0,1]. Immutable after construction; copies share storage.
class Mesh {
  public:
    explicit Mesh(std::vector<double> nodes);

    std::size_t node_count() const { return nodes_->size(); }
    std::size_t cell_count() const { return nodes_->size() - 1; }
    double node(std::size_t i) const { return (*nodes_)[i]; }
    const std::vector<double>& nodes() const { return *nodes_; }
    double cell_width(std::size_t c) const { return (*nodes_)[c + 1] - (*nodes_)[c]; }

    /// Index of the cell containing x; x == node(i) maps to the cell starting
    /// at i (last node maps to the last cell).
    std::size_t locate(double x) const;

    /// Index of the node equal to x within tol, if any.
    std::optional<std::size_t> find_node(double x, double tol = kNodeTol) const;

    bool same_as(const Mesh& other) const {
        return nodes_ == other.nodes_ || *nodes_ == *other.nodes_;
    }

  private:
    std::shared_ptr<const std::vector<double>> nodes_;
};

/// Union of the uniform grid {k/n_cells} with required_nodes, deduplicated
/// with absolute tolerance kNodeTol. Required nodes within tolerance of a
/// grid node are merged toward the grid node.
Mesh build_mesh(int n_cells, const std::vector<double>& required_nodes = {});

/// Continuous piecewise-linear function given by nodal values.
struct PiecewiseLinear {
    Mesh mesh;
    std::vector<double> values;

    PiecewiseLinear(Mesh m, std::vector<double> v);

    double operator()(double x) const;
    double sup_norm() const;
    /// Constant slope on cell c.
    double slope(std::size_t c) const {
        return (values[c + 1] - values[c]) / mesh.cell_width(c);
    }

    static PiecewiseLinear zero(const Mesh& m) {
        return PiecewiseLinear(m, std::vector<double>(m.node_count(), 0.0));
    }
    static PiecewiseLinear constant(const Mesh& m, double c) {
        return PiecewiseLinear(m, std::vector<double>(m.node_count(), c));
    }
};

/// Linear interpolation between bracketing nodes; exact at nodes.
double evaluate(const PiecewiseLinear& f, double x);

/// One value per cell.
struct PiecewiseConstant {
    Mesh mesh;
    std::vector<double> values;

    PiecewiseConstant(Mesh m, std::vector<double> v);

    double in_cell(std::size_t c) const { return values[c]; }
    static PiecewiseConstant constant(const Mesh& m, double c) {
        return PiecewiseConstant(m, std::vector<double>(m.cell_count(), c));
    }
};

// Closed-form cell integrals for linear factors. Assembly relies on these
// being exact for the representable coefficient class.

/// ∫ f g over a cell of width h, f and g linear with the given endpoint values.
inline double cell_int_product(double h, double fl, double fr, double gl, double gr) {
    return h / 6.0 * (2.0 * fl * gl + fl * gr + fr * gl + 2.0 * fr * gr);
}

/// ∫ f over a cell of width h, f linear.
inline double cell_int(double h, double fl, double fr) {
    return 0.5 * h * (fl + fr);
}

}  // namespace slp
