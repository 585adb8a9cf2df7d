#pragma once

#include <span>
#include <vector>

namespace ecotone {

struct ConvergenceStudy {
    std::vector<double> scales;  // grid spacing or dt per level
    std::vector<double> errors;  // final-time sup error against the exact solution
    double order = 0.0;          // least-squares slope of log(error) vs log(scale)
};

/// Heat-only manufactured solution w = e^{-t} cos(pi x) on [0,1]; dt is tied
/// to dx^2 so both error sources scale together. Needs >= 3 grid levels.
ConvergenceStudy spatial_convergence(std::span<const int> node_counts, double dt_factor = 0.1,
                                     double horizon = 1.0);

/// Coupled smooth recipe v = e^{-t} cos(pi x), w = e^{-2t} cos(pi x) on a fixed
/// fine grid; error measured against the exact pair at the final time.
/// Needs >= 3 time steps sizes.
ConvergenceStudy temporal_convergence(std::span<const double> dts, int nodes = 257,
                                      double horizon = 1.0);

}  // namespace ecotone
