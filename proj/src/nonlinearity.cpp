#include "ecotone/nonlinearity.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace ecotone {

namespace {

double eval_checked(const ScalarFn& fn, double v, const char* what) {
    double y = fn(v);
    if (!std::isfinite(y))
        throw std::runtime_error(std::string("validate_assumptions: non-finite value of ") +
                                 what + " at v=" + std::to_string(v));
    return y;
}

}  // namespace

AssumptionReport validate_assumptions(const NonlinearitySpec& spec, double lo, double hi,
                                      int samples) {
    if (!(hi > lo))
        throw std::invalid_argument("validate_assumptions: degenerate range");
    if (samples < 100)
        throw std::invalid_argument("validate_assumptions: need at least 100 samples");

    AssumptionReport rep;
    double inf = std::numeric_limits<double>::infinity();
    rep.damping.margin = inf;
    rep.coercivity.margin = inf;
    rep.slope.margin = inf;
    double kappa = inf;

    for (int k = 0; k < samples; ++k) {
        double v = lo + (hi - lo) * k / (samples - 1);
        double fv = eval_checked(spec.f, v, "f");
        double fpv = eval_checked(spec.fp, v, "f'");
        double pv = eval_checked(spec.phi, v, "phi");

        double m2 = pv - spec.beta0;
        if (m2 < rep.damping.margin) { rep.damping.margin = m2; rep.damping.worst_v = v; }

        double m3 = fv * v + spec.C - spec.gamma0 * std::pow(std::abs(v), 2.0 + spec.delta);
        if (m3 < rep.coercivity.margin) { rep.coercivity.margin = m3; rep.coercivity.worst_v = v; }

        double m4 = fpv + spec.K;
        if (m4 < rep.slope.margin) { rep.slope.margin = m4; rep.slope.worst_v = v; }

        kappa = std::min(kappa, fpv);
    }

    double slack = 1e-12 * (1.0 + std::abs(lo) + std::abs(hi));
    rep.damping.pass = rep.damping.margin >= -slack;
    rep.coercivity.pass = rep.coercivity.margin >= -slack;
    rep.slope.pass = rep.slope.margin >= -slack;
    rep.monotone = kappa > 0.0;
    rep.kappa0 = rep.monotone ? kappa : 0.0;

    // F must match the integral of f: compare increments over coarse subintervals
    // against composite Simpson with fine resolution.
    int cells = 16;
    rep.consistency.pass = true;
    rep.consistency.margin = 0.0;
    double worst = 0.0;
    for (int c = 0; c < cells; ++c) {
        double a = lo + (hi - lo) * c / cells;
        double b = lo + (hi - lo) * (c + 1) / cells;
        int n = 256;  // Simpson panels per cell
        double hstep = (b - a) / (2 * n);
        double s = spec.f(a) + spec.f(b);
        for (int i = 1; i < 2 * n; ++i)
            s += spec.f(a + i * hstep) * ((i % 2) ? 4.0 : 2.0);
        double quad = s * hstep / 3.0;
        double err = std::abs((spec.F(b) - spec.F(a)) - quad);
        if (err > worst) { worst = err; rep.consistency.worst_v = a; }
    }
    double fscale = std::max(std::abs(spec.F(lo)), std::abs(spec.F(hi))) + 1.0;
    rep.consistency.margin = worst;
    rep.consistency.pass = worst <= 1e-8 * fscale;

    return rep;
}

NonlinearitySpec monotone_cubic() {
    NonlinearitySpec s;
    s.name = "monotone_cubic";
    s.f = [](double v) { return v + v * v * v; };
    s.fp = [](double v) { return 1.0 + 3.0 * v * v; };
    s.F = [](double v) { return 0.5 * v * v + 0.25 * v * v * v * v; };
    s.phi = [](double) { return 1.0; };
    s.phip = [](double) { return 0.0; };
    s.R = [](double y) { return 0.5 * y * y; };
    s.beta0 = 1.0;
    s.K = 0.0;
    s.gamma0 = 0.5;
    s.delta = 2.0;
    s.C = 0.0;
    return s;
}

NonlinearitySpec bistable_cubic() {
    NonlinearitySpec s;
    s.name = "bistable_cubic";
    s.f = [](double v) { return v * v * v - v; };
    s.fp = [](double v) { return 3.0 * v * v - 1.0; };
    s.F = [](double v) { return 0.25 * v * v * v * v - 0.5 * v * v; };
    s.phi = [](double) { return 1.0; };
    s.phip = [](double) { return 0.0; };
    s.R = [](double y) { return 0.5 * y * y; };
    s.beta0 = 1.0;
    s.K = 1.0;
    s.gamma0 = 0.5;
    s.delta = 2.0;
    s.C = 1.0;
    return s;
}

NonlinearitySpec polynomial_spec(std::vector<double> f_coeffs, std::vector<double> phi_coeffs,
                                 double beta0, double K, double gamma0, double delta, double C) {
    auto horner = [](const std::vector<double>& c, double v) {
        double y = 0.0;
        for (size_t i = c.size(); i-- > 0;)
            y = y * v + c[i];
        return y;
    };
    auto derive = [](const std::vector<double>& c) {
        std::vector<double> d;
        for (size_t i = 1; i < c.size(); ++i)
            d.push_back(c[i] * (double)i);
        if (d.empty()) d.push_back(0.0);
        return d;
    };
    auto antiderive = [](const std::vector<double>& c) {
        std::vector<double> a(c.size() + 1, 0.0);
        for (size_t i = 0; i < c.size(); ++i)
            a[i + 1] = c[i] / (double)(i + 1);
        return a;
    };

    NonlinearitySpec s;
    s.name = "polynomial";
    auto fd = derive(f_coeffs);
    auto fa = antiderive(f_coeffs);
    // R(y) = int_0^y phi(s) s ds: antiderivative of the shifted polynomial s*phi(s)
    std::vector<double> sphi(phi_coeffs.size() + 1, 0.0);
    for (size_t i = 0; i < phi_coeffs.size(); ++i)
        sphi[i + 1] = phi_coeffs[i];
    auto ra = antiderive(sphi);
    auto pd = derive(phi_coeffs);

    s.f = [f_coeffs, horner](double v) { return horner(f_coeffs, v); };
    s.fp = [fd, horner](double v) { return horner(fd, v); };
    s.F = [fa, horner](double v) { return horner(fa, v); };
    s.phi = [phi_coeffs, horner](double v) { return horner(phi_coeffs, v); };
    s.phip = [pd, horner](double v) { return horner(pd, v); };
    s.R = [ra, horner](double y) { return horner(ra, y); };
    s.beta0 = beta0;
    s.K = K;
    s.gamma0 = gamma0;
    s.delta = delta;
    s.C = C;
    return s;
}

}  // namespace ecotone
