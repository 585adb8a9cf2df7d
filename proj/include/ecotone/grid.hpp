#pragma once

#include <array>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace ecotone {

/// Uniform tensor grid on a 1D interval or 2D rectangle with trapezoidal
/// quadrature weights (half weight at boundary nodes). Node (i,j) maps to
/// linear index i + nx*j.
struct Grid {
    int dim = 1;
    std::array<double, 2> extent{1.0, 0.0};
    std::array<int, 2> nodes{0, 1};
    std::array<double, 2> spacing{0.0, 0.0};
    std::vector<double> weight;

    int node_count() const { return nodes[0] * nodes[1]; }

    std::array<double, 2> position(int idx) const {
        int i = idx % nodes[0];
        int j = idx / nodes[0];
        return {i * spacing[0], dim == 2 ? j * spacing[1] : 0.0};
    }

    double measure() const { return dim == 2 ? extent[0] * extent[1] : extent[0]; }
};

inline Grid make_grid(int dim, std::array<double, 2> extents, std::array<int, 2> nodes_per_axis) {
    if (dim != 1 && dim != 2)
        throw std::invalid_argument("make_grid: dim must be 1 or 2");
    for (int a = 0; a < dim; ++a) {
        if (nodes_per_axis[a] < 3)
            throw std::invalid_argument("make_grid: need at least 3 nodes per axis");
        if (!(extents[a] > 0.0))
            throw std::invalid_argument("make_grid: extents must be positive");
    }
    Grid g;
    g.dim = dim;
    g.extent = extents;
    g.nodes = nodes_per_axis;
    if (dim == 1) {
        g.extent[1] = 0.0;
        g.nodes[1] = 1;
    }
    for (int a = 0; a < dim; ++a)
        g.spacing[a] = g.extent[a] / (g.nodes[a] - 1);

    g.weight.resize(g.node_count());
    for (int j = 0; j < g.nodes[1]; ++j) {
        double wy = 1.0;
        if (dim == 2)
            wy = (j == 0 || j == g.nodes[1] - 1) ? 0.5 * g.spacing[1] : g.spacing[1];
        for (int i = 0; i < g.nodes[0]; ++i) {
            double wx = (i == 0 || i == g.nodes[0] - 1) ? 0.5 * g.spacing[0] : g.spacing[0];
            g.weight[i + g.nodes[0] * j] = wx * wy;
        }
    }
    return g;
}

inline Grid make_grid_1d(double extent, int nodes) {
    return make_grid(1, {extent, 0.0}, {nodes, 1});
}

inline double integrate(const Grid& g, std::span<const double> field) {
    if ((int)field.size() != g.node_count())
        throw std::invalid_argument("integrate: field size does not match grid");
    double s = 0.0;
    for (int k = 0; k < g.node_count(); ++k)
        s += g.weight[k] * field[k];
    return s;
}

inline double inner(const Grid& g, std::span<const double> a, std::span<const double> b) {
    if ((int)a.size() != g.node_count() || (int)b.size() != g.node_count())
        throw std::invalid_argument("inner: field size does not match grid");
    double s = 0.0;
    for (int k = 0; k < g.node_count(); ++k)
        s += g.weight[k] * a[k] * b[k];
    return s;
}

}  // namespace ecotone
