#pragma once

#include <span>
#include <string>
#include <vector>

#include "ecotone/system.hpp"

namespace ecotone {

struct OdeRoot {
    double u = 0.0;
    double fprime = 0.0;
    bool hyperbolic = false;  // |f'(u)| >= 1e-8
};

struct OdeRootSet {
    std::vector<OdeRoot> roots;  // sorted ascending
    /// smallest gap between adjacent roots; +inf for a single root
    double min_gap() const;
    int nearest(double v) const;
};

OdeRootSet ode_roots(const NonlinearitySpec& spec, double lo, double hi, int scan_points = 1000);

/// Newton with bisection safeguard; requires a strictly monotone f.
double invert_f(const NonlinearitySpec& spec, double y, double lo = -50.0, double hi = 50.0);

struct EquilibriumSolution {
    std::vector<double> v0, w0;
    double residual = 0.0;         // ||f(v0) - alpha w0||_inf
    double correction_norm = 0.0;  // ||v0 - seed||_inf for partition-type constructions
    double margin = -1.0;          // smallest singular value of the linearization; <0 = not computed
    std::string source;            // monotone-elliptic | partition | near-homogeneous
};

struct NewtonError : std::runtime_error {
    std::vector<double> residual_history;
    NewtonError(const std::string& msg, std::vector<double> hist)
        : std::runtime_error(msg), residual_history(std::move(hist)) {}
};

struct NewtonOptions {
    double tol = 1e-11;
    int max_iter = 60;
    double alpha_max = 0.05;        // perturbative-regime cap for partition seeds
    double omega2_fraction = 0.05;  // |Omega_2| <= fraction * |Omega| for near-homogeneous seeds
};

/// ||f(v) - alpha*(heat-solve of v)||_inf; one Helmholtz solve.
double equilibrium_residual(std::span<const double> v, const SystemParams& params);

EquilibriumSolution solve_monotone_equilibrium(const SystemParams& params,
                                               std::span<const double> w_guess,
                                               const NewtonOptions& opt = {});

/// Steady state near the piecewise-constant root profile given by per-node
/// labels into the root set.
EquilibriumSolution partition_equilibrium(const std::vector<int>& labels, const OdeRootSet& roots,
                                          const SystemParams& params,
                                          const NewtonOptions& opt = {});

/// Newton refinement from an arbitrary starting field; correction is measured
/// against the start. No perturbative-regime guard.
EquilibriumSolution equilibrium_from_seed(std::span<const double> v_start,
                                          const SystemParams& params,
                                          const NewtonOptions& opt = {});

/// Steady state near vbar with a small-measure island at the companion level
/// vtilde, f(vbar) = f(vtilde); alpha need not be small.
EquilibriumSolution near_homogeneous_equilibrium(double vbar, double vtilde,
                                                 const std::vector<int>& omega2_nodes,
                                                 const SystemParams& params,
                                                 const NewtonOptions& opt = {});

/// Smallest singular value of  M = diag(f'(v0)) - alpha * heat^{-1}  by inverse
/// power iteration on M^2 with matrix-free applications.
double hyperbolicity_margin(std::span<const double> v0, const SystemParams& params,
                            int max_iter = 5000, double tol = 1e-9);

/// Same margin from the elliptic-form linearization -Lap + 1 - alpha/f'(v0)
/// (monotone case); 1D direct solves.
double hyperbolicity_margin_elliptic(std::span<const double> v0, const SystemParams& params,
                                     int max_iter = 5000, double tol = 1e-9);

FieldState to_state(const EquilibriumSolution& eq);

/// Index of the root whose basin contains (v0, vt0) under the uncoupled limit
/// ODE, by forward integration.
int basin_label(const NonlinearitySpec& spec, const OdeRootSet& roots, double v0, double vt0,
                double horizon = 200.0, double dt = 1e-2);

}  // namespace ecotone
