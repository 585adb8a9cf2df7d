#include "ecotone/stepper.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecotone/diagnostics.hpp"
#include "ecotone/operators.hpp"

namespace ecotone {

FieldState step(const FieldState& state, const SystemParams& params, const StepperConfig& cfg,
                const Forcing* forcing) {
    const Grid& g = params.grid;
    int n = g.node_count();
    double dt = cfg.dt;

    FieldState next;
    next.t = state.t + dt;
    next.v.resize(n);
    next.vt.resize(n);

    for (int k = 0; k < n; ++k) {
        double rhs = params.alpha * state.w[k] - params.nl.f(state.v[k]);
        if (forcing && forcing->oscillator) {
            auto p = g.position(k);
            rhs += forcing->oscillator(state.t, p[0], p[1]);
        }
        double vt_new = (state.vt[k] + dt * rhs) / (1.0 + dt * params.nl.phi(state.v[k]));
        next.vt[k] = vt_new;
        next.v[k] = state.v[k] + dt * vt_new;
    }

    // (1 + dt*damping) w_{n+1} - dt*diffusivity*Lap w_{n+1} = w_n + dt*source*v_{n+1}
    std::vector<double> rhs_w(n);
    for (int k = 0; k < n; ++k) {
        rhs_w[k] = state.w[k] + dt * params.heat.source * next.v[k];
        if (forcing && forcing->heat) {
            auto p = g.position(k);
            rhs_w[k] += dt * forcing->heat(next.t, p[0], p[1]);
        }
    }
    next.w = helmholtz_solve(g, rhs_w, 1.0 + dt * params.heat.damping,
                             dt * params.heat.diffusivity, cfg.heat_tol);

    for (int k = 0; k < n; ++k) {
        if (!(std::abs(next.v[k]) < cfg.blowup_threshold) ||
            !(std::abs(next.vt[k]) < cfg.blowup_threshold) ||
            !(std::abs(next.w[k]) < cfg.blowup_threshold))
            throw BlowUpError(next.t, k);
    }
    return next;
}

namespace {

struct Integrands {
    double sq_l2 = 0.0;  // ||vt||_2^2 + ||wt||_2^2
    double abs_l1 = 0.0; // ||vtt||_1 + ||vt||_1 + ||wt||_1
};

Integrands integrands_of(const Grid& g, std::span<const double> vt, std::span<const double> vtt,
                         std::span<const double> wt) {
    Integrands r;
    double vt2 = 0, wt2 = 0, s1 = 0;
    for (int k = 0; k < g.node_count(); ++k) {
        double wq = g.weight[k];
        vt2 += wq * vt[k] * vt[k];
        wt2 += wq * wt[k] * wt[k];
        s1 += wq * (std::abs(vtt[k]) + std::abs(vt[k]) + std::abs(wt[k]));
    }
    r.sq_l2 = vt2 + wt2;
    r.abs_l1 = s1;
    return r;
}

}  // namespace

TrajectoryRecord simulate(const FieldState& initial, const SystemParams& params,
                          const StepperConfig& cfg, double horizon,
                          const ProbeConfig& probes, const Forcing* forcing) {
    check_stepper(cfg);
    if (!(horizon > 0.0))
        throw std::invalid_argument("simulate: horizon must be positive");
    const Grid& g = params.grid;
    check_state(initial, g);
    int n = g.node_count();
    double inf = std::numeric_limits<double>::infinity();

    TrajectoryRecord rec;
    rec.probe_nodes = probes.nodes;
    for (int node : probes.nodes)
        if (node < 0 || node >= n)
            throw std::invalid_argument("simulate: probe node out of range");
    rec.node_vt.resize(probes.nodes.size());
    rec.node_vtt.resize(probes.nodes.size());
    rec.node_wt.resize(probes.nodes.size());
    rec.node_int_vt.resize(probes.nodes.size());
    rec.node_int_vtt.resize(probes.nodes.size());
    rec.node_int_wt.resize(probes.nodes.size());

    long steps = (long)std::llround(horizon / cfg.dt);
    if (steps < 1) steps = 1;

    FieldState cur = initial;

    // time-derivative fields; at t=0 evaluated from the equations themselves,
    // afterwards from the scheme increments
    std::vector<double> vtt(n), wt(n);
    laplacian_apply(g, cur.w, wt);
    for (int k = 0; k < n; ++k) {
        wt[k] = params.heat.diffusivity * wt[k] - params.heat.damping * cur.w[k] +
                params.heat.source * cur.v[k];
        vtt[k] = params.alpha * cur.w[k] - params.nl.phi(cur.v[k]) * cur.vt[k] -
                 params.nl.f(cur.v[k]);
        if (forcing) {
            auto p = g.position(k);
            if (forcing->heat) wt[k] += forcing->heat(cur.t, p[0], p[1]);
            if (forcing->oscillator) vtt[k] += forcing->oscillator(cur.t, p[0], p[1]);
        }
    }

    Integrands gi = integrands_of(g, cur.vt, vtt, wt);
    double diss_l2 = 0.0, diss_l1 = 0.0;
    std::vector<double> node_int_vt(probes.nodes.size(), 0.0);
    std::vector<double> node_int_vtt(probes.nodes.size(), 0.0);
    std::vector<double> node_int_wt(probes.nodes.size(), 0.0);
    std::vector<double> node_prev_vt(probes.nodes.size()), node_prev_vtt(probes.nodes.size()),
        node_prev_wt(probes.nodes.size());
    for (size_t p = 0; p < probes.nodes.size(); ++p) {
        int k = probes.nodes[p];
        node_prev_vt[p] = std::abs(cur.vt[k]);
        node_prev_vtt[p] = std::abs(vtt[k]);
        node_prev_wt[p] = std::abs(wt[k]);
    }

    auto take_sample = [&](long sample_index) {
        DiagnosticSample s;
        s.t = cur.t;
        s.lyap = lyapunov(cur, params);
        s.l1_v = lp_norm(g, cur.v, 1.0);
        s.l2_v = lp_norm(g, cur.v, 2.0);
        s.linf_v = lp_norm(g, cur.v, inf);
        s.l1_vt = lp_norm(g, cur.vt, 1.0);
        s.l2_vt = lp_norm(g, cur.vt, 2.0);
        s.linf_vt = lp_norm(g, cur.vt, inf);
        s.l2_w = lp_norm(g, cur.w, 2.0);
        s.h1_w = h1_norm(g, cur.w);
        s.linf_w = lp_norm(g, cur.w, inf);
        s.l1_wt = lp_norm(g, wt, 1.0);
        s.linf_wt = lp_norm(g, wt, inf);
        s.l1_vtt = lp_norm(g, vtt, 1.0);
        s.diss_l2 = diss_l2;
        s.diss_l1 = diss_l1;
        double phi_term = 0.0;
        for (int k = 0; k < n; ++k)
            phi_term += g.weight[k] * params.nl.phi(cur.v[k]) * cur.vt[k] * cur.vt[k];
        double wt2 = lp_norm(g, wt, 2.0);
        // dL/dt = -2(phi(v) vt, vt) - 2*alpha ||wt||^2; the stored integrand is
        // the dissipation rate with its sign flipped.
        s.energy_integrand = 2.0 * phi_term + 2.0 * params.alpha * wt2 * wt2;
        for (double h : probes.h_list) {
            s.semi_v.push_back(lip_seminorm(g, cur.v, h));
            s.semi_vt.push_back(lip_seminorm(g, cur.vt, h));
        }
        for (size_t p = 0; p < probes.nodes.size(); ++p) {
            int k = probes.nodes[p];
            rec.node_vt[p].push_back(cur.vt[k]);
            rec.node_vtt[p].push_back(vtt[k]);
            rec.node_wt[p].push_back(wt[k]);
            rec.node_int_vt[p].push_back(node_int_vt[p]);
            rec.node_int_vtt[p].push_back(node_int_vtt[p]);
            rec.node_int_wt[p].push_back(node_int_wt[p]);
        }
        rec.samples.push_back(std::move(s));
        if (probes.snapshot_every > 0 && sample_index % probes.snapshot_every == 0)
            rec.snapshots.push_back(cur);
    };

    take_sample(0);
    long sample_count = 1;

    for (long it = 0; it < steps; ++it) {
        FieldState nxt;
        try {
            nxt = step(cur, params, cfg, forcing);
        } catch (const BlowUpError& e) {
            rec.final_state = cur;
            rec.completed = false;
            rec.error = e.what();
            return rec;
        }
        double dt = cfg.dt;
        for (int k = 0; k < n; ++k) {
            vtt[k] = (nxt.vt[k] - cur.vt[k]) / dt;
            wt[k] = (nxt.w[k] - cur.w[k]) / dt;
        }
        Integrands gn = integrands_of(g, nxt.vt, vtt, wt);
        diss_l2 += 0.5 * dt * (gi.sq_l2 + gn.sq_l2);
        diss_l1 += 0.5 * dt * (gi.abs_l1 + gn.abs_l1);
        gi = gn;
        for (size_t p = 0; p < probes.nodes.size(); ++p) {
            int k = probes.nodes[p];
            double avt = std::abs(nxt.vt[k]);
            double avtt = std::abs(vtt[k]);
            double awt = std::abs(wt[k]);
            node_int_vt[p] += 0.5 * dt * (node_prev_vt[p] + avt);
            node_int_vtt[p] += 0.5 * dt * (node_prev_vtt[p] + avtt);
            node_int_wt[p] += 0.5 * dt * (node_prev_wt[p] + awt);
            node_prev_vt[p] = avt;
            node_prev_vtt[p] = avtt;
            node_prev_wt[p] = awt;
        }
        cur = std::move(nxt);
        if ((it + 1) % cfg.snapshot_stride == 0 || it == steps - 1) {
            take_sample(sample_count);
            ++sample_count;
        }
    }

    rec.final_state = cur;
    rec.completed = true;
    return rec;
}

}  // namespace ecotone
