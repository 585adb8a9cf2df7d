#pragma once

#include <vector>

#include "ecotone/stepper.hpp"
#include "ecotone/system.hpp"

namespace ecotone {

/// State of the three-species system in its native variables.
struct ForestState {
    double t = 0.0;
    std::vector<double> u, v, w;
};

/// One step of the forest system discretized so that it is the exact discrete
/// conjugate of the canonical step under u = (vt + h v)/f: eliminating u gives
/// the same floating-point update as step() applied to forest_reduce output.
ForestState forest_step(const ForestState& state, const ForestParams& p, const Grid& g,
                        const StepperConfig& cfg);

struct ForestRun {
    std::vector<double> times;
    std::vector<std::vector<double>> v_series;  // v field at each sample
    ForestState final_state;
};

ForestRun simulate_forest(const ForestState& initial, const ForestParams& p, const Grid& g,
                          const StepperConfig& cfg, double horizon, int sample_stride = 1);

/// Initial canonical state corresponding to a forest state (vt = f u - h v).
FieldState forest_to_canonical(const ForestState& s, const ForestParams& p);

}  // namespace ecotone
