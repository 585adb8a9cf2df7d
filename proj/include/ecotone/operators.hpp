#pragma once

#include <span>
#include <vector>

#include "ecotone/grid.hpp"

namespace ecotone {

/// Thrown when an iterative linear solve exhausts its iteration budget.
struct SolverError : std::runtime_error {
    double residual;
    SolverError(const std::string& msg, double res) : std::runtime_error(msg), residual(res) {}
};

/// Second-order Neumann Laplacian with mirror ghost nodes. Symmetric with
/// respect to the trapezoidal inner product; annihilates constants.
void laplacian_apply(const Grid& g, std::span<const double> field, std::span<double> out);

std::vector<double> laplacian(const Grid& g, std::span<const double> field);

/// (-Lap_h w, w) in grid quadrature, clamped at zero; equals the squared
/// discrete-gradient norm by summation by parts.
double grad_energy(const Grid& g, std::span<const double> w);

/// Solves (-diffusivity*Lap_h + shift) u = rhs. 1D: direct tridiagonal solve,
/// averaged with its mirror-image sweep so the solver commutes with the grid
/// reflection exactly in floating point. 2D: conjugate gradients in the
/// quadrature inner product.
std::vector<double> helmholtz_solve(const Grid& g, std::span<const double> rhs, double shift,
                                    double diffusivity, double tol = 1e-12,
                                    int max_iter = 0);

/// Same operator with a per-node shift field (used by Newton linearizations).
/// 1D only direct; 2D requires an SPD shift (min shift > 0).
std::vector<double> helmholtz_solve_diag(const Grid& g, std::span<const double> rhs,
                                         std::span<const double> shift, double diffusivity,
                                         double tol = 1e-12, int max_iter = 0);

}  // namespace ecotone
