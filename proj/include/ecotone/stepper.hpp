#pragma once

#include <functional>
#include <stdexcept>

#include "ecotone/system.hpp"
#include "ecotone/trajectory.hpp"

namespace ecotone {

struct StepperConfig {
    double dt = 1e-3;
    double heat_tol = 1e-10;   // iterative heat-solve tolerance (2D)
    int snapshot_stride = 1;   // diagnostics sampled every k-th step
    double blowup_threshold = 1e12;
};

inline void check_stepper(const StepperConfig& c) {
    if (!(c.dt > 0.0))
        throw std::invalid_argument("StepperConfig: dt must be positive");
    if (!(c.heat_tol > 0.0) || c.heat_tol > 1e-6)
        throw std::invalid_argument("StepperConfig: heat tolerance must be in (0, 1e-6]");
    if (c.snapshot_stride < 1)
        throw std::invalid_argument("StepperConfig: snapshot stride must be >= 1");
}

struct BlowUpError : std::runtime_error {
    double t;
    int node;
    BlowUpError(double t_, int node_)
        : std::runtime_error("blow-up at t=" + std::to_string(t_) + ", node " +
                             std::to_string(node_)),
          t(t_), node(node_) {}
};

/// Optional manufactured-solution forcing added to the oscillator equation
/// (evaluated at t_n) and the heat equation (evaluated at t_{n+1}).
struct Forcing {
    std::function<double(double t, double x, double y)> oscillator;
    std::function<double(double t, double x, double y)> heat;
};

/// One splitting step: damping-implicit velocity update, explicit position
/// update, then backward-Euler heat solve.
FieldState step(const FieldState& state, const SystemParams& params, const StepperConfig& cfg,
                const Forcing* forcing = nullptr);

TrajectoryRecord simulate(const FieldState& initial, const SystemParams& params,
                          const StepperConfig& cfg, double horizon,
                          const ProbeConfig& probes = {}, const Forcing* forcing = nullptr);

}  // namespace ecotone
