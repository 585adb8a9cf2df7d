#include "ecotone/equilibria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ecotone/operators.hpp"

namespace ecotone {

double OdeRootSet::min_gap() const {
    if (roots.size() < 2) return std::numeric_limits<double>::infinity();
    double g = std::numeric_limits<double>::infinity();
    for (size_t i = 1; i < roots.size(); ++i)
        g = std::min(g, roots[i].u - roots[i - 1].u);
    return g;
}

int OdeRootSet::nearest(double v) const {
    if (roots.empty()) throw std::runtime_error("OdeRootSet: empty");
    int best = 0;
    for (size_t i = 1; i < roots.size(); ++i)
        if (std::abs(roots[i].u - v) < std::abs(roots[best].u - v)) best = (int)i;
    return best;
}

OdeRootSet ode_roots(const NonlinearitySpec& spec, double lo, double hi, int scan_points) {
    if (scan_points < 100)
        throw std::invalid_argument("ode_roots: need at least 100 scan points");
    if (!(hi > lo))
        throw std::invalid_argument("ode_roots: degenerate range");

    double scale = 0.0;
    std::vector<double> xs(scan_points), fs(scan_points);
    for (int i = 0; i < scan_points; ++i) {
        xs[i] = lo + (hi - lo) * i / (scan_points - 1);
        fs[i] = spec.f(xs[i]);
        scale = std::max(scale, std::abs(fs[i]));
    }
    if (scale == 0.0) scale = 1.0;

    auto polish = [&](double a, double b) {
        double fa = spec.f(a);
        for (int it = 0; it < 80; ++it) {
            double m = 0.5 * (a + b);
            double fm = spec.f(m);
            if ((fa <= 0.0) == (fm <= 0.0)) { a = m; fa = fm; }
            else b = m;
        }
        double x = 0.5 * (a + b);
        for (int it = 0; it < 20; ++it) {
            double fx = spec.f(x), dx = spec.fp(x);
            if (std::abs(dx) < 1e-300) break;
            double step = fx / dx;
            double xn = x - step;
            if (xn < a || xn > b) break;
            x = xn;
            if (std::abs(step) < 1e-16 * (1.0 + std::abs(x))) break;
        }
        return x;
    };

    OdeRootSet set;
    auto add = [&](double r) {
        for (const auto& q : set.roots)
            if (std::abs(q.u - r) <= 1e-9 * (hi - lo)) return;
        OdeRoot root;
        root.u = r;
        root.fprime = spec.fp(r);
        root.hyperbolic = std::abs(root.fprime) >= 1e-8;
        set.roots.push_back(root);
    };

    for (int i = 0; i + 1 < scan_points; ++i) {
        if (fs[i] == 0.0) { add(xs[i]); continue; }
        if ((fs[i] > 0.0) != (fs[i + 1] > 0.0))
            add(polish(xs[i], xs[i + 1]));
    }
    if (scan_points >= 1 && fs[scan_points - 1] == 0.0) add(xs[scan_points - 1]);

    std::sort(set.roots.begin(), set.roots.end(),
              [](const OdeRoot& a, const OdeRoot& b) { return a.u < b.u; });
    for (const auto& r : set.roots)
        if (std::abs(spec.f(r.u)) > 1e-12 * scale)
            throw std::runtime_error("ode_roots: root polish failed at u=" + std::to_string(r.u));
    return set;
}

double invert_f(const NonlinearitySpec& spec, double y, double lo, double hi) {
    if (!(spec.fp(lo) > 0.0 && spec.fp(hi) > 0.0 && spec.fp(0.5 * (lo + hi)) > 0.0))
        throw std::domain_error("invert_f: f is not monotone on the working range");
    // expand bracket until f(lo) <= y <= f(hi)
    for (int i = 0; i < 200 && spec.f(lo) > y; ++i) lo = lo < 0 ? 2.0 * lo : lo - 1.0;
    for (int i = 0; i < 200 && spec.f(hi) < y; ++i) hi = hi > 0 ? 2.0 * hi : hi + 1.0;
    if (spec.f(lo) > y || spec.f(hi) < y)
        throw std::domain_error("invert_f: could not bracket the preimage");

    double a = lo, b = hi, x = 0.5 * (a + b);
    double tol = 1e-13 * (1.0 + std::abs(y));
    for (int it = 0; it < 200; ++it) {
        double fx = spec.f(x);
        if (std::abs(fx - y) <= tol) return x;
        if (fx < y) a = x; else b = x;
        double d = spec.fp(x);
        double xn = (d > 0.0) ? x - (fx - y) / d : 0.5 * (a + b);
        if (!(xn > a && xn < b)) xn = 0.5 * (a + b);
        x = xn;
    }
    return x;
}

namespace {

// heat^{-1} v = source * (-diff*Lap + damping)^{-1} v, the steady response of w
std::vector<double> heat_inverse(const SystemParams& p, std::span<const double> x) {
    auto u = helmholtz_solve(p.grid, x, p.heat.damping, p.heat.diffusivity, 1e-13);
    if (p.heat.source != 1.0)
        for (double& e : u) e *= p.heat.source;
    return u;
}

// M x = f'(v0) x - alpha * heat^{-1} x   (symmetric in the quadrature inner product)
std::vector<double> apply_M(const SystemParams& p, std::span<const double> fp_v0,
                            std::span<const double> x) {
    auto hx = heat_inverse(p, x);
    std::vector<double> y(x.size());
    for (size_t k = 0; k < x.size(); ++k)
        y[k] = fp_v0[k] * x[k] - p.alpha * hx[k];
    return y;
}

// CG for M^2 y = b (SPD in the quadrature inner product)
std::vector<double> cg_msq(const SystemParams& p, std::span<const double> fp_v0,
                           std::span<const double> b, double tol, int max_iter) {
    const Grid& g = p.grid;
    int n = g.node_count();
    std::vector<double> y(n, 0.0), r(b.begin(), b.end()), q = r;
    double b2 = std::sqrt(inner(g, b, b));
    if (b2 == 0.0) return y;
    double rr = inner(g, r, r);
    for (int it = 0; it < max_iter; ++it) {
        auto aq = apply_M(p, fp_v0, apply_M(p, fp_v0, q));
        double qaq = inner(g, q, aq);
        double a = rr / qaq;
        for (int k = 0; k < n; ++k) {
            y[k] += a * q[k];
            r[k] -= a * aq[k];
        }
        double rr_new = inner(g, r, r);
        if (std::sqrt(rr_new) <= tol * b2) return y;
        double beta = rr_new / rr;
        rr = rr_new;
        for (int k = 0; k < n; ++k)
            q[k] = r[k] + beta * q[k];
    }
    throw SolverError("cg_msq: exceeded max iterations", std::sqrt(rr) / b2);
}

// Solve M delta = rhs through the normal system M^2 delta = M rhs.
std::vector<double> solve_M(const SystemParams& p, std::span<const double> fp_v0,
                            std::span<const double> rhs) {
    auto mb = apply_M(p, fp_v0, rhs);
    return cg_msq(p, fp_v0, mb, 1e-13, 4000);
}

EquilibriumSolution newton_on_v(std::vector<double> v, const std::vector<double>& seed,
                                const SystemParams& p, const NewtonOptions& opt,
                                const std::string& source, double max_correction) {
    const Grid& g = p.grid;
    int n = g.node_count();
    double inf = std::numeric_limits<double>::infinity();

    auto residual_field = [&](std::span<const double> vv) {
        auto hv = heat_inverse(p, vv);
        std::vector<double> F(n);
        for (int k = 0; k < n; ++k)
            F[k] = p.nl.f(vv[k]) - p.alpha * hv[k];
        return F;
    };
    auto inf_norm = [](std::span<const double> x) {
        double m = 0.0;
        for (double e : x) m = std::max(m, std::abs(e));
        return m;
    };

    std::vector<double> hist;
    auto F = residual_field(v);
    double res = inf_norm(F);
    hist.push_back(res);

    std::vector<double> fp(n);
    for (int it = 0; it < opt.max_iter && res > opt.tol; ++it) {
        for (int k = 0; k < n; ++k)
            fp[k] = p.nl.fp(v[k]);
        auto delta = solve_M(p, fp, F);

        double lam = 1.0;
        std::vector<double> vn(n);
        double res_n = res;
        std::vector<double> Fn;
        for (int bt = 0; bt < 8; ++bt) {
            for (int k = 0; k < n; ++k)
                vn[k] = v[k] - lam * delta[k];
            Fn = residual_field(vn);
            res_n = inf_norm(Fn);
            if (res_n < res * (1.0 - 0.25 * lam) || res_n <= opt.tol) break;
            lam *= 0.5;
        }
        if (res_n >= res && res > opt.tol) {
            hist.push_back(res_n);
            throw NewtonError("equilibrium Newton stagnated, residual=" + std::to_string(res),
                              hist);
        }
        v = vn;
        F = Fn;
        res = res_n;
        hist.push_back(res);

        if (max_correction < inf) {
            double corr = 0.0;
            for (int k = 0; k < n; ++k)
                corr = std::max(corr, std::abs(v[k] - seed[k]));
            if (corr > max_correction)
                throw NewtonError(
                    "equilibrium Newton left the perturbative regime (correction " +
                        std::to_string(corr) + " > " + std::to_string(max_correction) +
                        "); reduce alpha",
                    hist);
        }
    }
    if (res > opt.tol)
        throw NewtonError("equilibrium Newton did not converge, residual=" + std::to_string(res),
                          hist);

    EquilibriumSolution eq;
    eq.v0 = std::move(v);
    // steady w from the heat balance; residual re-measured against it
    std::vector<double> src(n);
    for (int k = 0; k < n; ++k) src[k] = p.heat.source * eq.v0[k];
    eq.w0 = helmholtz_solve(g, src, p.heat.damping, p.heat.diffusivity, 1e-13);
    double r2 = 0.0, corr = 0.0;
    for (int k = 0; k < n; ++k) {
        r2 = std::max(r2, std::abs(p.nl.f(eq.v0[k]) - p.alpha * eq.w0[k]));
        corr = std::max(corr, std::abs(eq.v0[k] - seed[k]));
    }
    eq.residual = r2;
    eq.correction_norm = corr;
    eq.source = source;
    eq.margin = hyperbolicity_margin(eq.v0, p);
    return eq;
}

}  // namespace

double equilibrium_residual(std::span<const double> v, const SystemParams& params) {
    auto hv = heat_inverse(params, v);
    double m = 0.0;
    for (size_t k = 0; k < v.size(); ++k)
        m = std::max(m, std::abs(params.nl.f(v[k]) - params.alpha * hv[k]));
    return m;
}

EquilibriumSolution solve_monotone_equilibrium(const SystemParams& params,
                                               std::span<const double> w_guess,
                                               const NewtonOptions& opt) {
    const Grid& g = params.grid;
    int n = g.node_count();
    if ((int)w_guess.size() != n)
        throw std::invalid_argument("solve_monotone_equilibrium: guess size mismatch");

    std::vector<double> w(w_guess.begin(), w_guess.end());
    std::vector<double> hist;

    auto G_of = [&](std::span<const double> ww) {
        // G(w) = (-d Lap + damping) w - source * f^{-1}(alpha w)
        auto lw = laplacian(g, ww);
        std::vector<double> G(n);
        for (int k = 0; k < n; ++k)
            G[k] = -params.heat.diffusivity * lw[k] + params.heat.damping * ww[k] -
                   params.heat.source * invert_f(params.nl, params.alpha * ww[k]);
        return G;
    };
    auto inf_norm = [](std::span<const double> x) {
        double m = 0.0;
        for (double e : x) m = std::max(m, std::abs(e));
        return m;
    };

    auto G = G_of(w);
    double res = inf_norm(G);
    hist.push_back(res);
    for (int it = 0; it < opt.max_iter && res > opt.tol; ++it) {
        // linearization: -d Lap + diag(damping - source*alpha/f'(f^{-1}(alpha w)))
        std::vector<double> shift(n);
        for (int k = 0; k < n; ++k) {
            double vk = invert_f(params.nl, params.alpha * w[k]);
            shift[k] = params.heat.damping -
                       params.heat.source * params.alpha / params.nl.fp(vk);
        }
        auto delta = helmholtz_solve_diag(g, G, shift, params.heat.diffusivity, 1e-13);
        double lam = 1.0, res_n = res;
        std::vector<double> wn(n), Gn;
        for (int bt = 0; bt < 8; ++bt) {
            for (int k = 0; k < n; ++k) wn[k] = w[k] - lam * delta[k];
            Gn = G_of(wn);
            res_n = inf_norm(Gn);
            if (res_n < res * (1.0 - 0.25 * lam) || res_n <= opt.tol) break;
            lam *= 0.5;
        }
        if (res_n >= res && res > opt.tol)
            throw NewtonError("monotone equilibrium Newton stagnated", hist);
        w = wn;
        G = Gn;
        res = res_n;
        hist.push_back(res);
    }
    if (res > opt.tol)
        throw NewtonError("monotone equilibrium Newton did not converge", hist);

    EquilibriumSolution eq;
    eq.w0 = w;
    auto lw = laplacian(g, w);
    eq.v0.resize(n);
    for (int k = 0; k < n; ++k)
        eq.v0[k] = (-params.heat.diffusivity * lw[k] + params.heat.damping * w[k]) /
                   params.heat.source;
    double r = 0.0;
    for (int k = 0; k < n; ++k)
        r = std::max(r, std::abs(params.nl.f(eq.v0[k]) - params.alpha * eq.w0[k]));
    eq.residual = r;
    eq.correction_norm = 0.0;
    eq.source = "monotone-elliptic";
    eq.margin = hyperbolicity_margin(eq.v0, params);
    return eq;
}

EquilibriumSolution partition_equilibrium(const std::vector<int>& labels, const OdeRootSet& roots,
                                          const SystemParams& params, const NewtonOptions& opt) {
    const Grid& g = params.grid;
    int n = g.node_count();
    if ((int)labels.size() != n)
        throw std::invalid_argument("partition_equilibrium: label count mismatch");
    if (params.alpha > opt.alpha_max)
        throw std::domain_error("partition_equilibrium: alpha exceeds the perturbative cap");
    std::vector<double> seed(n);
    for (int k = 0; k < n; ++k) {
        int l = labels[k];
        if (l < 0 || l >= (int)roots.roots.size())
            throw std::domain_error("partition_equilibrium: invalid label " + std::to_string(l));
        if (!roots.roots[l].hyperbolic)
            throw std::domain_error("partition_equilibrium: non-hyperbolic root referenced");
        seed[k] = roots.roots[l].u;
    }
    double guard = roots.min_gap() / 4.0;
    return newton_on_v(seed, seed, params, opt, "partition", guard);
}

EquilibriumSolution equilibrium_from_seed(std::span<const double> v_start,
                                          const SystemParams& params,
                                          const NewtonOptions& opt) {
    std::vector<double> v(v_start.begin(), v_start.end());
    return newton_on_v(v, v, params, opt, "refined",
                       std::numeric_limits<double>::infinity());
}

namespace {

// scalar Newton for f(c) = alpha*c near the starting level (constant fields
// are invariant under the heat solve, so this is the homogeneous reduction)
double homogeneous_level(const NonlinearitySpec& nl, double alpha, double start) {
    double c = start;
    for (int it = 0; it < 100; ++it) {
        double r = nl.f(c) - alpha * c;
        double d = nl.fp(c) - alpha;
        if (std::abs(d) < 1e-12)
            throw std::domain_error("near_homogeneous_equilibrium: degenerate base level");
        double cn = c - r / d;
        if (std::abs(cn - c) < 1e-14 * (1.0 + std::abs(c))) return cn;
        c = cn;
    }
    throw std::domain_error("near_homogeneous_equilibrium: base level iteration diverged");
}

// companion preimage: f(t) = y on the branch through the starting level
double companion_level(const NonlinearitySpec& nl, double y, double start) {
    double t = start;
    for (int it = 0; it < 100; ++it) {
        double d = nl.fp(t);
        if (std::abs(d) < 1e-12)
            throw std::domain_error("near_homogeneous_equilibrium: non-hyperbolic companion level");
        double tn = t - (nl.f(t) - y) / d;
        if (std::abs(tn - t) < 1e-14 * (1.0 + std::abs(t))) return tn;
        t = tn;
    }
    throw std::domain_error("near_homogeneous_equilibrium: companion level iteration diverged");
}

}  // namespace

EquilibriumSolution near_homogeneous_equilibrium(double vbar, double vtilde,
                                                 const std::vector<int>& omega2_nodes,
                                                 const SystemParams& params,
                                                 const NewtonOptions& opt) {
    const Grid& g = params.grid;
    int n = g.node_count();
    if (std::abs(params.nl.f(vbar) - params.nl.f(vtilde)) > 1e-10 * (1.0 + std::abs(params.nl.f(vbar))))
        throw std::domain_error("near_homogeneous_equilibrium: f(vbar) != f(vtilde)");

    // refine the declared levels to the constant equilibrium f(c) = alpha*c and
    // the companion preimage on the branch through vtilde
    double cbar = homogeneous_level(params.nl, params.alpha, vbar);
    double ctil = companion_level(params.nl, params.nl.f(cbar), vtilde);

    double measure2 = 0.0;
    std::vector<double> seed(n, cbar);
    for (int k : omega2_nodes) {
        if (k < 0 || k >= n)
            throw std::invalid_argument("near_homogeneous_equilibrium: node out of range");
        seed[k] = ctil;
        measure2 += g.weight[k];
    }
    double delta0 = opt.omega2_fraction * g.measure();
    if (measure2 > delta0)
        throw std::domain_error("near_homogeneous_equilibrium: |Omega_2|=" +
                                std::to_string(measure2) + " exceeds delta_0=" +
                                std::to_string(delta0));

    // hyperbolicity of the homogeneous base linearization
    std::vector<double> base(n, cbar);
    double margin0 = hyperbolicity_margin(base, params);
    if (margin0 <= 1e-6)
        throw std::domain_error("near_homogeneous_equilibrium: homogeneous base not hyperbolic");

    return newton_on_v(seed, seed, params, opt, "near-homogeneous",
                       std::numeric_limits<double>::infinity());
}

double hyperbolicity_margin(std::span<const double> v0, const SystemParams& params,
                            int max_iter, double tol) {
    const Grid& g = params.grid;
    int n = g.node_count();
    if ((int)v0.size() != n)
        throw std::invalid_argument("hyperbolicity_margin: field size mismatch");
    std::vector<double> fp(n);
    for (int k = 0; k < n; ++k) fp[k] = params.nl.fp(v0[k]);

    // inverse power iteration on M^2
    std::vector<double> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = 1.0 + 0.5 * std::cos(2.5 * k);
    double nrm = std::sqrt(inner(g, z, z));
    for (double& e : z) e /= nrm;

    double sigma = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        auto y = cg_msq(params, fp, z, 1e-12, 4000);
        double lam_inv = inner(g, z, y);  // approx largest eigenvalue of M^{-2}
        if (lam_inv <= 0.0)
            throw std::runtime_error("hyperbolicity_margin: indefinite normal operator");
        double sigma_new = 1.0 / std::sqrt(lam_inv);
        double ynrm = std::sqrt(inner(g, y, y));
        for (int k = 0; k < n; ++k) z[k] = y[k] / ynrm;
        if (sigma >= 0.0 && std::abs(sigma_new - sigma) <= tol * std::max(1.0, sigma)) {
            return sigma_new;
        }
        sigma = sigma_new;
    }
    throw std::runtime_error("hyperbolicity_margin: power iteration did not converge");
}

double hyperbolicity_margin_elliptic(std::span<const double> v0, const SystemParams& params,
                                     int max_iter, double tol) {
    const Grid& g = params.grid;
    int n = g.node_count();
    if ((int)v0.size() != n)
        throw std::invalid_argument("hyperbolicity_margin_elliptic: field size mismatch");
    // A = -d Lap + damping - diag(source*alpha/f'(v0)); requires monotone f
    std::vector<double> shift(n);
    for (int k = 0; k < n; ++k) {
        double d = params.nl.fp(v0[k]);
        if (!(d > 0.0))
            throw std::domain_error("hyperbolicity_margin_elliptic: f' must be positive");
        shift[k] = params.heat.damping - params.heat.source * params.alpha / d;
    }

    std::vector<double> z(n);
    for (int k = 0; k < n; ++k)
        z[k] = 1.0 + 0.5 * std::cos(2.5 * k);
    double nrm = std::sqrt(inner(g, z, z));
    for (double& e : z) e /= nrm;

    double sigma = -1.0;
    for (int it = 0; it < max_iter; ++it) {
        // one A^{-2} application
        auto y1 = helmholtz_solve_diag(g, z, shift, params.heat.diffusivity, 1e-13);
        auto y = helmholtz_solve_diag(g, y1, shift, params.heat.diffusivity, 1e-13);
        double lam_inv = inner(g, z, y);
        if (lam_inv <= 0.0)
            throw std::runtime_error("hyperbolicity_margin_elliptic: indefinite normal operator");
        double sigma_new = 1.0 / std::sqrt(lam_inv);
        double ynrm = std::sqrt(inner(g, y, y));
        for (int k = 0; k < n; ++k) z[k] = y[k] / ynrm;
        if (sigma >= 0.0 && std::abs(sigma_new - sigma) <= tol * std::max(1.0, sigma))
            return sigma_new;
        sigma = sigma_new;
    }
    throw std::runtime_error("hyperbolicity_margin_elliptic: power iteration did not converge");
}

FieldState to_state(const EquilibriumSolution& eq) {
    FieldState s;
    s.v = eq.v0;
    s.vt.assign(eq.v0.size(), 0.0);
    s.w = eq.w0;
    return s;
}

int basin_label(const NonlinearitySpec& spec, const OdeRootSet& roots, double v0, double vt0,
                double horizon, double dt) {
    double y = v0, p = vt0;
    auto rhs = [&](double yy, double pp, double& dy, double& dp) {
        dy = pp;
        dp = -spec.phi(yy) * pp - spec.f(yy);
    };
    long steps = (long)std::llround(horizon / dt);
    for (long it = 0; it < steps; ++it) {
        double k1y, k1p, k2y, k2p, k3y, k3p, k4y, k4p;
        rhs(y, p, k1y, k1p);
        rhs(y + 0.5 * dt * k1y, p + 0.5 * dt * k1p, k2y, k2p);
        rhs(y + 0.5 * dt * k2y, p + 0.5 * dt * k2p, k3y, k3p);
        rhs(y + dt * k3y, p + dt * k3p, k4y, k4p);
        y += dt / 6.0 * (k1y + 2.0 * k2y + 2.0 * k3y + k4y);
        p += dt / 6.0 * (k1p + 2.0 * k2p + 2.0 * k3p + k4p);
        if (std::abs(p) < 1e-10) {
            int r = roots.nearest(y);
            if (std::abs(y - roots.roots[r].u) < 1e-9) return r;
        }
    }
    return roots.nearest(y);
}

}  // namespace ecotone
