#include "ecotone/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecotone {

namespace {

double nrm(const Vec3& x, int n) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) s += x[i] * x[i];
    return std::sqrt(s);
}

double inf_norm(const Vec3& x, int n) {
    double m = 0.0;
    for (int i = 0; i < n; ++i) m = std::max(m, std::abs(x[i]));
    return m;
}

Vec3 eval_forcing(const std::function<Vec3(double)>& h, double t) {
    return h ? h(t) : Vec3{0.0, 0.0, 0.0};
}

// ordinary least squares y = C1 + C2 x; falls back to a constant fit when
// the abscissae are (numerically) identical
void affine_fit(std::span<const double> x, std::span<const double> y, double& C1, double& C2) {
    size_t m = x.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < m; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    double det = m * sxx - sx * sx;
    double scale = sxx + 1.0;
    if (std::abs(det) <= 1e-12 * scale * m) {
        C2 = 0.0;
        C1 = sy / m;
        return;
    }
    C2 = (m * sxy - sx * sy) / det;
    C1 = (sy - C2 * sx) / m;
}

}  // namespace

OdeTrajectory run_perturbed_ode(const ForcedOdeProblem& p, double dt) {
    if (!(dt > 0.0)) throw std::invalid_argument("run_perturbed_ode: dt must be positive");
    if (p.n < 1 || p.n > 3) throw std::invalid_argument("run_perturbed_ode: n must be 1..3");
    if (!(p.horizon > 0.0)) throw std::invalid_argument("run_perturbed_ode: horizon must be positive");
    if (!p.field) throw std::invalid_argument("run_perturbed_ode: missing vector field");
    if (p.forcing && !p.forcing_deriv)
        throw std::invalid_argument("run_perturbed_ode: forcing given without its derivative");

    long steps = (long)std::llround(p.horizon / dt);
    if (steps < 1) steps = 1;

    auto rhs = [&](double t, const Vec3& u) {
        Vec3 f = p.field(u);
        if (p.forcing) {
            Vec3 h = p.forcing(t);
            for (int i = 0; i < p.n; ++i) f[i] += h[i];
        }
        return f;
    };

    OdeTrajectory traj;
    traj.t.reserve(steps + 1);
    traj.u.reserve(steps + 1);
    traj.du.reserve(steps + 1);

    Vec3 u = p.u0;
    double t = 0.0;
    double sampled_bound = 0.0;
    double prev_du = 0.0, prev_dh = 0.0;

    auto record = [&](double tt, const Vec3& uu) {
        Vec3 d = rhs(tt, uu);
        traj.t.push_back(tt);
        traj.u.push_back(uu);
        traj.du.push_back(d);
        double cur_du = nrm(d, p.n);
        double cur_dh = 0.0;
        if (p.forcing) {
            Vec3 h = p.forcing(tt), hp = p.forcing_deriv(tt);
            cur_dh = nrm(hp, p.n);
            sampled_bound = std::max(sampled_bound, std::max(inf_norm(h, p.n), inf_norm(hp, p.n)));
        }
        if (traj.t.size() > 1) {
            double ddt = tt - traj.t[traj.t.size() - 2];
            traj.int_du += 0.5 * ddt * (prev_du + cur_du);
            traj.int_dh += 0.5 * ddt * (prev_dh + cur_dh);
        }
        prev_du = cur_du;
        prev_dh = cur_dh;
    };

    record(t, u);
    for (long it = 0; it < steps; ++it) {
        Vec3 k1 = rhs(t, u);
        Vec3 u2, u3, u4;
        for (int i = 0; i < p.n; ++i) u2[i] = u[i] + 0.5 * dt * k1[i];
        Vec3 k2 = rhs(t + 0.5 * dt, u2);
        for (int i = 0; i < p.n; ++i) u3[i] = u[i] + 0.5 * dt * k2[i];
        Vec3 k3 = rhs(t + 0.5 * dt, u3);
        for (int i = 0; i < p.n; ++i) u4[i] = u[i] + dt * k3[i];
        Vec3 k4 = rhs(t + dt, u4);
        for (int i = 0; i < p.n; ++i)
            u[i] += dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        t = (it + 1) * dt;
        for (int i = 0; i < p.n; ++i)
            if (!(std::abs(u[i]) < 1e12))
                throw std::runtime_error("run_perturbed_ode: blow-up at t=" + std::to_string(t));
        record(t, u);
    }

    if (p.forcing && p.epsilon > 0.0) {
        if (std::abs(sampled_bound - p.epsilon) > 0.05 * p.epsilon && sampled_bound > p.epsilon)
            throw std::invalid_argument(
                "run_perturbed_ode: declared epsilon understates the sampled forcing bound");
    }
    return traj;
}

std::vector<Segment> segment_neighborhoods(const ForcedOdeProblem& p, const OdeTrajectory& traj,
                                           double delta) {
    std::vector<Segment> segs;
    if (traj.t.empty()) return segs;
    auto label_of = [&](const Vec3& u) {
        for (size_t e = 0; e < p.equilibria.size(); ++e) {
            Vec3 d;
            for (int i = 0; i < p.n; ++i) d[i] = u[i] - p.equilibria[e][i];
            if (nrm(d, p.n) <= delta) return (int)e;
        }
        return -1;
    };
    Segment cur{traj.t.front(), traj.t.front(), label_of(traj.u.front())};
    for (size_t k = 1; k < traj.t.size(); ++k) {
        int l = label_of(traj.u[k]);
        if (l == cur.equilibrium) {
            cur.t1 = traj.t[k];
        } else {
            cur.t1 = traj.t[k];  // switch attributed to the sample instant
            segs.push_back(cur);
            cur = Segment{traj.t[k], traj.t[k], l};
        }
    }
    segs.push_back(cur);
    return segs;
}

double out_time(const std::vector<Segment>& segments) {
    double s = 0.0;
    for (const auto& seg : segments)
        if (seg.equilibrium < 0) s += seg.t1 - seg.t0;
    return s;
}

TvReport tv_check(const ForcedOdeProblem& base, std::span<const double> horizons, double dt,
                  const TvOptions& opt) {
    if (horizons.size() < 3)
        throw std::invalid_argument("tv_check: need at least 3 horizons");
    TvReport rep;
    rep.regime_exit = base.epsilon > opt.epsilon0;

    for (double T : horizons) {
        ForcedOdeProblem p = base;
        p.horizon = T;
        OdeTrajectory traj = run_perturbed_ode(p, dt);
        rep.horizons.push_back(T);
        rep.int_du.push_back(traj.int_du);
        rep.int_dh.push_back(traj.int_dh);
        rep.out_times.push_back(out_time(segment_neighborhoods(p, traj, opt.delta)));
    }

    affine_fit(rep.int_dh, rep.int_du, rep.C1, rep.C2);

    bool ok = !rep.regime_exit && rep.C2 <= opt.c2_max && rep.C2 >= -1e-9;
    for (size_t i = 0; ok && i < rep.horizons.size(); ++i) {
        double fit = rep.C1 + rep.C2 * rep.int_dh[i];
        if (rep.int_du[i] > fit + opt.slack * (std::abs(fit) + 1e-9)) ok = false;
    }
    rep.pass = ok;
    return rep;
}

NodeStabilizationReport node_stabilization_report(const TrajectoryRecord& traj, const Grid& grid,
                                                  const std::vector<int>& nodes, double alpha,
                                                  double slack) {
    NodeStabilizationReport rep;
    rep.nodes = nodes;
    for (int node : nodes) {
        auto it = std::find(traj.probe_nodes.begin(), traj.probe_nodes.end(), node);
        if (it == traj.probe_nodes.end())
            throw std::invalid_argument("node_stabilization_report: node " +
                                        std::to_string(node) + " was not recorded");
        size_t p = it - traj.probe_nodes.begin();
        if (traj.node_int_vt[p].empty())
            throw std::invalid_argument("node_stabilization_report: empty probe series");
        rep.int_vtt.push_back(traj.node_int_vtt[p].back());
        rep.int_vt.push_back(traj.node_int_vt[p].back());
        rep.alpha_int_wt.push_back(alpha * traj.node_int_wt[p].back());
    }

    std::vector<double> lhs(nodes.size());
    for (size_t i = 0; i < nodes.size(); ++i)
        lhs[i] = rep.int_vtt[i] + rep.int_vt[i];
    affine_fit(rep.alpha_int_wt, lhs, rep.C1, rep.C2);

    bool ok = true;
    for (size_t i = 0; i < nodes.size(); ++i) {
        double fit = rep.C1 + rep.C2 * rep.alpha_int_wt[i];
        if (lhs[i] > fit + slack * (std::abs(fit) + 1e-9)) ok = false;
        rep.l1_lhs += grid.weight[nodes[i]] * lhs[i];
        rep.l1_rhs += grid.weight[nodes[i]] * (rep.C1 + rep.C2 * rep.alpha_int_wt[i]);
    }
    rep.pass = ok;
    return rep;
}

}  // namespace ecotone
