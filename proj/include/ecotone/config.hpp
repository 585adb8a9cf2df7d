#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "ecotone/system.hpp"

namespace ecotone {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Flat run configuration parsed from the sectioned key=value format.
/// Unknown keys are rejected with the offending section.key named.
struct RunConfig {
    // [model]
    std::string catalog = "monotone";      // monotone | bistable | polynomial
    std::vector<double> f_coeffs, phi_coeffs;  // ascending degree, polynomial only
    double beta0 = 0.0, K = 0.0, gamma0 = 0.0, growth_delta = 0.0, C = 0.0;
    double alpha = 0.5;

    // [grid]
    int dim = 1;
    int nx = 257, ny = 3;
    double lx = 1.0, ly = 1.0;

    // [stepper]
    double dt = 1e-3;
    double horizon = 10.0;
    int snapshot_stride = 100;
    double heat_tol = 1e-10;

    // [experiment]
    double split_at = 0.5;                 // partition-eq: interface position
    std::vector<double> h_list;            // seminorm scales
    std::vector<double> horizons;          // perturb-lab horizon set
    std::vector<int> probe_nodes;
    double epsilon = 0.05;                 // perturb-lab forcing amplitude
    double vbar = 0.0, vtilde = 0.0;       // near-homog-eq levels
    double omega2_lo = 0.0, omega2_hi = 0.0;  // near-homog-eq island interval
    double steepness = 0.1;                // stabilize: initial tanh scale
    double contrast_steepness = 0.01;      // lipschitz-contrast second run
    double tolerance = 1e-3;               // stabilize acceptance distance

    // [output]
    std::string out_dir = "out";

    std::string raw_text;  // full config text, for the manifest hash
};

RunConfig parse_config(const std::string& path);
RunConfig parse_config_text(const std::string& text);

/// Builds the nonlinearity + system parameters a config describes.
NonlinearitySpec config_nonlinearity(const RunConfig& c);
SystemParams config_params(const RunConfig& c);

}  // namespace ecotone
