#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "ecotone/grid.hpp"
#include "ecotone/nonlinearity.hpp"

namespace ecotone {

/// Coefficients of the parabolic component  dw/dt - diffusivity*Lap(w) + damping*w = source*v.
/// The canonical system uses the identity coefficients.
struct HeatCoeffs {
    double diffusivity = 1.0;
    double damping = 1.0;
    double source = 1.0;
};

struct SystemParams {
    double alpha = 0.0;  // coupling constant in the oscillator equation, > 0 (0 allowed for decoupled studies)
    NonlinearitySpec nl;
    Grid grid;
    HeatCoeffs heat{};
};

inline SystemParams make_params(double alpha, NonlinearitySpec nl, Grid grid, HeatCoeffs heat = {}) {
    if (alpha < 0.0)
        throw std::invalid_argument("SystemParams: alpha must be non-negative");
    return SystemParams{alpha, std::move(nl), std::move(grid), heat};
}

/// Phase-space point (v, dv/dt, w) as nodal fields at one time instant.
struct FieldState {
    double t = 0.0;
    std::vector<double> v, vt, w;
};

inline FieldState zero_state(const Grid& g) {
    FieldState s;
    size_t n = g.node_count();
    s.v.assign(n, 0.0);
    s.vt.assign(n, 0.0);
    s.w.assign(n, 0.0);
    return s;
}

inline void check_state(const FieldState& s, const Grid& g) {
    size_t n = g.node_count();
    if (s.v.size() != n || s.vt.size() != n || s.w.size() != n)
        throw std::invalid_argument("FieldState: field length does not match grid");
    for (size_t k = 0; k < n; ++k)
        if (!std::isfinite(s.v[k]) || !std::isfinite(s.vt[k]) || !std::isfinite(s.w[k]))
            throw std::invalid_argument("FieldState: non-finite entry at node " + std::to_string(k));
}

/// Parameters of the three-species growth model: young density u, old density v,
/// seed density w, with mortality gamma(v).
struct ForestParams {
    double alpha, beta, delta, d, f, h;
    ScalarFn gamma;
    ScalarFn gammap;
};

inline void check_forest(const ForestParams& p) {
    if (!(p.alpha > 0 && p.beta > 0 && p.delta > 0 && p.d > 0 && p.f > 0 && p.h > 0))
        throw std::invalid_argument("ForestParams: all six constants must be positive");
}

/// Result of eliminating u: the second-order oscillator form with
///   phi~(v) = h + gamma(v) + f,  f~(v) = h (gamma(v)+f) v,  coupling = beta*delta*f,
/// plus the heat coefficients (d, beta, source=alpha) and the map recovering u.
struct ForestReduction {
    NonlinearitySpec nl;
    double coupling;
    HeatCoeffs heat;
    std::function<double(double v, double vt)> recover_u;
};

ForestReduction forest_reduce(const ForestParams& p);

}  // namespace ecotone
