#pragma once

#include <array>
#include <functional>
#include <span>
#include <vector>

#include "ecotone/grid.hpp"
#include "ecotone/trajectory.hpp"

namespace ecotone {

using Vec3 = std::array<double, 3>;

/// Forced autonomous system u' = F(u) + h(t) on R^n, n <= 3. Unused
/// components are ignored; h may be null for the unforced case.
struct ForcedOdeProblem {
    int n = 1;
    std::function<Vec3(const Vec3&)> field;
    std::vector<Vec3> equilibria;
    std::function<Vec3(double)> forcing;        // h(t)
    std::function<Vec3(double)> forcing_deriv;  // h'(t)
    double epsilon = 0.0;                       // declared W^{1,inf} bound on h
    Vec3 u0{};
    double horizon = 0.0;
};

struct OdeTrajectory {
    std::vector<double> t;
    std::vector<Vec3> u;
    std::vector<Vec3> du;   // F(u) + h(t) at samples
    double int_du = 0.0;    // int ||u'|| dt (Euclidean norm, trapezoid)
    double int_dh = 0.0;    // int ||h'|| dt
};

/// Classical 4-stage one-step integration. Validates the declared epsilon
/// against the sampled sup of max(|h|, |h'|) within 5%.
OdeTrajectory run_perturbed_ode(const ForcedOdeProblem& p, double dt);

struct Segment {
    double t0 = 0.0, t1 = 0.0;
    int equilibrium = -1;  // -1 = outside every delta-neighborhood
};

/// Partition of [0,T] into maximal intervals by which delta-neighborhood
/// of an equilibrium (if any) contains u(t).
std::vector<Segment> segment_neighborhoods(const ForcedOdeProblem& p, const OdeTrajectory& traj,
                                           double delta = 0.1);

double out_time(const std::vector<Segment>& segments);

struct TvReport {
    std::vector<double> horizons;
    std::vector<double> int_du, int_dh;
    std::vector<double> out_times;
    double C1 = 0.0, C2 = 0.0;  // affine fit int_du ~ C1 + C2 * int_dh
    bool pass = false;
    bool regime_exit = false;   // epsilon above the configured threshold
};

struct TvOptions {
    double epsilon0 = 0.1;  // admissible forcing amplitude
    double c2_max = 100.0;  // slope cap
    double delta = 0.1;     // neighborhood radius for segmentation
    double slack = 0.10;    // relative envelope slack
};

/// Runs the problem family over the given horizons and fits the affine
/// total-variation bound. Needs at least 3 horizons.
TvReport tv_check(const ForcedOdeProblem& base, std::span<const double> horizons, double dt,
                  const TvOptions& opt = {});

struct NodeStabilizationReport {
    std::vector<int> nodes;
    std::vector<double> int_vtt, int_vt, alpha_int_wt;  // per node
    double C1 = 0.0, C2 = 0.0;
    bool pass = false;
    double l1_lhs = 0.0, l1_rhs = 0.0;  // quadrature aggregation over the nodes
};

/// Per-node settling estimate int(|vtt|+|vt|) <= C1 + C2 * alpha * int|wt|
/// with constants fitted uniformly over the node list.
NodeStabilizationReport node_stabilization_report(const TrajectoryRecord& traj, const Grid& grid,
                                                  const std::vector<int>& nodes, double alpha,
                                                  double slack = 0.10);

}  // namespace ecotone
