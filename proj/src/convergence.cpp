#include "ecotone/convergence.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "ecotone/stepper.hpp"

namespace ecotone {

namespace {

double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    double det = m * sxx - sx * sx;
    return (m * sxy - sx * sy) / det;
}

FieldState run_to_horizon(FieldState s, const SystemParams& p, double dt, double horizon,
                          const Forcing& forcing) {
    StepperConfig cfg;
    cfg.dt = dt;
    long steps = (long)std::llround(horizon / dt);
    for (long it = 0; it < steps; ++it)
        s = step(s, p, cfg, &forcing);
    return s;
}

}  // namespace

ConvergenceStudy spatial_convergence(std::span<const int> node_counts, double dt_factor,
                                     double horizon) {
    if (node_counts.size() < 3)
        throw std::invalid_argument("spatial_convergence: need at least 3 grid levels");
    const double pi = std::numbers::pi;

    ConvergenceStudy st;
    for (int n : node_counts) {
        Grid g = make_grid_1d(1.0, n);
        double dx = g.spacing[0];
        double dt = dt_factor * dx * dx;
        SystemParams p = make_params(0.0, monotone_cubic(), g);

        FieldState s = zero_state(g);
        for (int k = 0; k < n; ++k)
            s.w[k] = std::cos(pi * g.position(k)[0]);

        Forcing forcing;
        forcing.heat = [pi](double t, double x, double) {
            return pi * pi * std::exp(-t) * std::cos(pi * x);
        };
        s = run_to_horizon(std::move(s), p, dt, horizon, forcing);

        double err = 0.0;
        for (int k = 0; k < n; ++k) {
            double exact = std::exp(-s.t) * std::cos(pi * g.position(k)[0]);
            err = std::max(err, std::abs(s.w[k] - exact));
        }
        st.scales.push_back(dx);
        st.errors.push_back(err);
    }
    st.order = lsq_slope(st.scales, st.errors);
    return st;
}

ConvergenceStudy temporal_convergence(std::span<const double> dts, int nodes, double horizon) {
    if (dts.size() < 3)
        throw std::invalid_argument("temporal_convergence: need at least 3 step sizes");
    const double pi = std::numbers::pi;
    const double alpha = 0.5;

    Grid g = make_grid_1d(1.0, nodes);
    SystemParams p = make_params(alpha, monotone_cubic(), g);

    auto v_exact = [pi](double t, double x) { return std::exp(-t) * std::cos(pi * x); };
    auto w_exact = [pi](double t, double x) { return std::exp(-2.0 * t) * std::cos(pi * x); };

    Forcing forcing;
    // with phi = 1 the vtt and phi*vt terms cancel for this recipe
    forcing.oscillator = [=](double t, double x, double) {
        double v = v_exact(t, x);
        return v + v * v * v - alpha * w_exact(t, x);
    };
    forcing.heat = [=](double t, double x, double) {
        return ((pi * pi - 1.0) * std::exp(-2.0 * t) - std::exp(-t)) * std::cos(pi * x);
    };

    ConvergenceStudy st;
    for (double dt : dts) {
        FieldState s = zero_state(g);
        for (int k = 0; k < nodes; ++k) {
            double x = g.position(k)[0];
            s.v[k] = v_exact(0.0, x);
            s.vt[k] = -v_exact(0.0, x);
            s.w[k] = w_exact(0.0, x);
        }
        s = run_to_horizon(std::move(s), p, dt, horizon, forcing);

        double err = 0.0;
        for (int k = 0; k < nodes; ++k) {
            double x = g.position(k)[0];
            err = std::max(err, std::abs(s.v[k] - v_exact(s.t, x)) +
                                    std::abs(s.w[k] - w_exact(s.t, x)));
        }
        st.scales.push_back(dt);
        st.errors.push_back(err);
    }
    st.order = lsq_slope(st.scales, st.errors);
    return st;
}

}  // namespace ecotone
