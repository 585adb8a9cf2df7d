#pragma once

#include <span>
#include <vector>

#include "ecotone/system.hpp"

namespace ecotone {

struct TrajectoryRecord;

/// L = ||vt||^2 + 2 int F(v) - 2 alpha (v,w) + alpha ||grad w||^2 + alpha ||w||^2.
double lyapunov(const FieldState& state, const SystemParams& params);

/// Quadrature-weighted L^p norm; p must be 1, 2 or infinity.
double lp_norm(const Grid& g, std::span<const double> field, double p);

double h1_norm(const Grid& g, std::span<const double> field);

/// max(||v||_inf, ||vt||_inf, ||w||_inf + ||w||_H1).
double phase_norm(const FieldState& state, const Grid& g);

/// sup over node pairs with |x1-x2| >= h of |f(x1)-f(x2)|/|x1-x2|.
double lip_seminorm(const Grid& g, std::span<const double> field, double h);

/// Normalized hat-kernel averaging of radius h, renormalized at boundaries.
std::vector<double> mollify(const Grid& g, std::span<const double> field, double h);

/// |L(t2) - L(t1) + int_{t1}^{t2} (2(phi(v)vt,vt) + 2 alpha ||wt||^2) dt|
/// with the time integral by trapezoid over stored samples.
double energy_identity_residual(const TrajectoryRecord& traj, const SystemParams& params,
                                double t1, double t2);

struct KatoReport {
    double worst_violation = 0.0;  // max over samples of lhs - rhs
    double rhs_scale = 0.0;        // max of the right-hand side over samples
};

/// Checks ||wt(t)||_L1 <= e^{-t}||wt(0)||_L1 + int_0^t e^{-(t-s)} ||vt(s)||_L1 ds
/// over the stored samples.
KatoReport kato_check(const TrajectoryRecord& traj);

}  // namespace ecotone
