#include "ecotone/forest.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

#include "ecotone/operators.hpp"

namespace ecotone {

namespace {

// 16-point Gauss-Legendre on [0, y]; effectively exact for the smooth mortality
// profiles in play.
double gauss_integral(const std::function<double(double)>& g, double y) {
    static const std::array<double, 8> xs = {
        0.0950125098376374, 0.2816035507792589, 0.4580167776572274, 0.6178762444026438,
        0.7554044083550030, 0.8656312023878318, 0.9445750230732326, 0.9894009349916499};
    static const std::array<double, 8> ws = {
        0.1894506104550685, 0.1826034150449236, 0.1691565193950025, 0.1495959888165767,
        0.1246289712555339, 0.0951585116824928, 0.0622535239386479, 0.0271524594117541};
    double a = 0.5 * y;
    double s = 0.0;
    for (int i = 0; i < 8; ++i) {
        s += ws[i] * (g(a * (1.0 + xs[i])) + g(a * (1.0 - xs[i])));
    }
    return a * s;
}

}  // namespace

ForestReduction forest_reduce(const ForestParams& p) {
    check_forest(p);

    double f = p.f, h = p.h;
    auto gamma = p.gamma;
    auto gammap = p.gammap;

    NonlinearitySpec nl;
    nl.name = "forest_reduced";
    nl.phi = [gamma, f, h](double v) { return h + gamma(v) + f; };
    nl.phip = [gammap](double v) { return gammap(v); };
    nl.f = [gamma, f, h](double v) { return h * (gamma(v) + f) * v; };
    nl.fp = [gamma, gammap, f, h](double v) {
        return h * (gamma(v) + f) + h * gammap(v) * v;
    };
    // antiderivatives by quadrature; exact when gamma is constant up to roundoff
    auto fmap = nl.f;
    nl.F = [fmap](double v) { return gauss_integral(fmap, v); };
    auto phimap = nl.phi;
    nl.R = [phimap](double y) {
        return gauss_integral([&](double s) { return phimap(s) * s; }, y);
    };

    // declared constants: gamma is a mortality rate, assumed bounded below; the
    // caller validates on the working range.
    nl.beta0 = h + f;
    nl.K = 0.0;
    nl.delta = 0.1;
    nl.gamma0 = 0.5 * h * f / std::pow(20.0, nl.delta);  // valid on |v| <= 20
    nl.C = 0.0;

    ForestReduction red;
    red.nl = std::move(nl);
    red.coupling = p.beta * p.delta * p.f;
    red.heat = HeatCoeffs{p.d, p.beta, p.alpha};
    red.recover_u = [f, h](double v, double vt) { return (vt + h * v) / f; };
    return red;
}

FieldState forest_to_canonical(const ForestState& s, const ForestParams& p) {
    FieldState c;
    c.t = s.t;
    c.v = s.v;
    c.w = s.w;
    c.vt.resize(s.v.size());
    for (size_t k = 0; k < s.v.size(); ++k)
        c.vt[k] = p.f * s.u[k] - p.h * s.v[k];
    return c;
}

ForestState forest_step(const ForestState& state, const ForestParams& p, const Grid& g,
                        const StepperConfig& cfg) {
    check_forest(p);
    int n = g.node_count();
    if ((int)state.u.size() != n || (int)state.v.size() != n || (int)state.w.size() != n)
        throw std::invalid_argument("forest_step: field length does not match grid");
    double dt = cfg.dt;
    double coupling = p.beta * p.delta * p.f;

    ForestState next;
    next.t = state.t + dt;
    next.u.resize(n);
    next.v.resize(n);

    // the update is written so that eliminating u reproduces the canonical
    // splitting step arithmetic term for term
    for (int k = 0; k < n; ++k) {
        double v = state.v[k];
        double vt = p.f * state.u[k] - p.h * v;
        double rhs = coupling * state.w[k] - p.h * (p.gamma(v) + p.f) * v;
        double vt_new = (vt + dt * rhs) / (1.0 + dt * (p.h + p.gamma(v) + p.f));
        next.v[k] = v + dt * vt_new;
        next.u[k] = (vt_new + p.h * next.v[k]) / p.f;
    }

    std::vector<double> rhs_w(n);
    for (int k = 0; k < n; ++k)
        rhs_w[k] = state.w[k] + dt * p.alpha * next.v[k];
    next.w = helmholtz_solve(g, rhs_w, 1.0 + dt * p.beta, dt * p.d, cfg.heat_tol);

    for (int k = 0; k < n; ++k)
        if (!(std::abs(next.u[k]) < cfg.blowup_threshold) ||
            !(std::abs(next.v[k]) < cfg.blowup_threshold) ||
            !(std::abs(next.w[k]) < cfg.blowup_threshold))
            throw BlowUpError(next.t, k);
    return next;
}

ForestRun simulate_forest(const ForestState& initial, const ForestParams& p, const Grid& g,
                          const StepperConfig& cfg, double horizon, int sample_stride) {
    check_stepper(cfg);
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate_forest: horizon must be positive");
    if (sample_stride < 1)
        throw std::invalid_argument("simulate_forest: sample stride must be >= 1");

    long steps = (long)std::llround(horizon / cfg.dt);
    if (steps < 1) steps = 1;

    ForestRun run;
    ForestState cur = initial;
    run.times.push_back(cur.t);
    run.v_series.push_back(cur.v);
    for (long it = 0; it < steps; ++it) {
        cur = forest_step(cur, p, g, cfg);
        if ((it + 1) % sample_stride == 0 || it == steps - 1) {
            run.times.push_back(cur.t);
            run.v_series.push_back(cur.v);
        }
    }
    run.final_state = std::move(cur);
    return run;
}

}  // namespace ecotone
