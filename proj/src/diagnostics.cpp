#include "ecotone/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "ecotone/operators.hpp"
#include "ecotone/trajectory.hpp"

namespace ecotone {

double lyapunov(const FieldState& state, const SystemParams& params) {
    const Grid& g = params.grid;
    check_state(state, g);
    int n = g.node_count();
    double vt2 = 0.0, intF = 0.0, vw = 0.0, w2 = 0.0;
    for (int k = 0; k < n; ++k) {
        double wq = g.weight[k];
        vt2 += wq * state.vt[k] * state.vt[k];
        intF += wq * params.nl.F(state.v[k]);
        vw += wq * state.v[k] * state.w[k];
        w2 += wq * state.w[k] * state.w[k];
    }
    double gw = grad_energy(g, state.w);
    return vt2 + 2.0 * intF - 2.0 * params.alpha * vw + params.alpha * gw + params.alpha * w2;
}

double lp_norm(const Grid& g, std::span<const double> field, double p) {
    if ((int)field.size() != g.node_count())
        throw std::invalid_argument("lp_norm: field size does not match grid");
    if (std::isinf(p)) {
        double m = 0.0;
        for (double v : field) m = std::max(m, std::abs(v));
        return m;
    }
    if (p == 1.0) {
        double s = 0.0;
        for (int k = 0; k < g.node_count(); ++k) s += g.weight[k] * std::abs(field[k]);
        return s;
    }
    if (p == 2.0) {
        double s = 0.0;
        for (int k = 0; k < g.node_count(); ++k) s += g.weight[k] * field[k] * field[k];
        return std::sqrt(s);
    }
    throw std::domain_error("lp_norm: p must be 1, 2 or infinity");
}

double h1_norm(const Grid& g, std::span<const double> field) {
    double l2 = lp_norm(g, field, 2.0);
    return std::sqrt(l2 * l2 + grad_energy(g, field));
}

double phase_norm(const FieldState& state, const Grid& g) {
    check_state(state, g);
    double inf = std::numeric_limits<double>::infinity();
    double a = lp_norm(g, state.v, inf);
    double b = lp_norm(g, state.vt, inf);
    double c = lp_norm(g, state.w, inf) + h1_norm(g, state.w);
    return std::max({a, b, c});
}

double lip_seminorm(const Grid& g, std::span<const double> field, double h) {
    int n = g.node_count();
    if ((int)field.size() != n)
        throw std::invalid_argument("lip_seminorm: field size does not match grid");
    double hmin = g.spacing[0];
    if (g.dim == 2) hmin = std::min(hmin, g.spacing[1]);
    if (h < hmin)
        throw std::domain_error("lip_seminorm: h below grid spacing");

    double best = 0.0;
    if (g.dim == 1) {
        double dx = g.spacing[0];
        int kmin = (int)std::ceil(h / dx - 1e-12);
        for (int i = 0; i < n; ++i) {
            for (int j = i + kmin; j < n; ++j) {
                double q = std::abs(field[j] - field[i]) / ((j - i) * dx);
                if (q > best) best = q;
            }
        }
        return best;
    }
    double h2 = h * h;
    for (int a = 0; a < n; ++a) {
        auto pa = g.position(a);
        for (int b = a + 1; b < n; ++b) {
            auto pb = g.position(b);
            double dx = pb[0] - pa[0], dy = pb[1] - pa[1];
            double d2 = dx * dx + dy * dy;
            if (d2 + 1e-14 < h2) continue;
            double q = std::abs(field[b] - field[a]) / std::sqrt(d2);
            if (q > best) best = q;
        }
    }
    return best;
}

std::vector<double> mollify(const Grid& g, std::span<const double> field, double h) {
    int n = g.node_count();
    if ((int)field.size() != n)
        throw std::invalid_argument("mollify: field size does not match grid");
    double hmin = g.spacing[0];
    if (g.dim == 2) hmin = std::min(hmin, g.spacing[1]);
    if (h < hmin)
        throw std::domain_error("mollify: h below grid spacing");

    std::vector<double> out(n, 0.0);
    if (g.dim == 1) {
        double dx = g.spacing[0];
        int r = (int)std::floor(h / dx + 1e-12);
        for (int i = 0; i < n; ++i) {
            double acc = 0.0, wsum = 0.0;
            for (int k = std::max(0, i - r); k <= std::min(n - 1, i + r); ++k) {
                double d = std::abs(k - i) * dx;
                double wk = (1.0 - d / h) * g.weight[k];
                if (wk <= 0.0) continue;
                acc += wk * field[k];
                wsum += wk;
            }
            out[i] = acc / wsum;
        }
        return out;
    }
    for (int a = 0; a < n; ++a) {
        auto pa = g.position(a);
        double acc = 0.0, wsum = 0.0;
        for (int b = 0; b < n; ++b) {
            auto pb = g.position(b);
            double dx = pb[0] - pa[0], dy = pb[1] - pa[1];
            double d = std::sqrt(dx * dx + dy * dy);
            if (d >= h) continue;
            double wk = (1.0 - d / h) * g.weight[b];
            acc += wk * field[b];
            wsum += wk;
        }
        out[a] = acc / wsum;
    }
    return out;
}

const DiagnosticSample& TrajectoryRecord::at_time(double t) const {
    if (samples.empty())
        throw std::runtime_error("TrajectoryRecord: empty");
    const DiagnosticSample* best = &samples.front();
    double dist = std::abs(best->t - t);
    for (const auto& s : samples) {
        double d = std::abs(s.t - t);
        if (d < dist) { dist = d; best = &s; }
    }
    return *best;
}

double energy_identity_residual(const TrajectoryRecord& traj, const SystemParams&,
                                double t1, double t2) {
    std::vector<const DiagnosticSample*> seg;
    for (const auto& s : traj.samples)
        if (s.t >= t1 - 1e-12 && s.t <= t2 + 1e-12) seg.push_back(&s);
    if (seg.size() < 2)
        throw std::invalid_argument("energy_identity_residual: segment needs >= 2 samples");
    double integral = 0.0;
    for (size_t i = 1; i < seg.size(); ++i)
        integral += 0.5 * (seg[i]->t - seg[i - 1]->t) *
                    (seg[i]->energy_integrand + seg[i - 1]->energy_integrand);
    return std::abs(seg.back()->lyap - seg.front()->lyap + integral);
}

KatoReport kato_check(const TrajectoryRecord& traj) {
    KatoReport rep;
    if (traj.samples.empty()) return rep;
    double t0 = traj.samples.front().t;
    double wt0 = traj.samples.front().l1_wt;
    // conv(t) = int_0^t e^{-(t-s)} ||vt(s)||_1 ds, advanced by exact
    // exponential weighting of the trapezoid increments
    double conv = 0.0;
    double prev_t = t0, prev_vt = traj.samples.front().l1_vt;
    for (const auto& s : traj.samples) {
        double dt = s.t - prev_t;
        if (dt > 0.0) {
            conv = conv * std::exp(-dt) +
                   0.5 * dt * (s.l1_vt + prev_vt * std::exp(-dt));
        }
        double rhs = std::exp(-(s.t - t0)) * wt0 + conv;
        double viol = s.l1_wt - rhs;
        rep.worst_violation = std::max(rep.worst_violation, viol);
        rep.rhs_scale = std::max(rep.rhs_scale, rhs);
        prev_t = s.t;
        prev_vt = s.l1_vt;
    }
    return rep;
}

}  // namespace ecotone
