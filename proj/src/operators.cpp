#include "ecotone/operators.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ecotone {

void laplacian_apply(const Grid& g, std::span<const double> field, std::span<double> out) {
    int n = g.node_count();
    if ((int)field.size() != n || (int)out.size() != n)
        throw std::invalid_argument("laplacian_apply: field size does not match grid");

    int nx = g.nodes[0];
    double ix2 = 1.0 / (g.spacing[0] * g.spacing[0]);
    if (g.dim == 1) {
        out[0] = 2.0 * (field[1] - field[0]) * ix2;
        for (int i = 1; i < nx - 1; ++i)
            out[i] = (field[i - 1] - 2.0 * field[i] + field[i + 1]) * ix2;
        out[nx - 1] = 2.0 * (field[nx - 2] - field[nx - 1]) * ix2;
        return;
    }

    int ny = g.nodes[1];
    double iy2 = 1.0 / (g.spacing[1] * g.spacing[1]);
    for (int j = 0; j < ny; ++j) {
        for (int i = 0; i < nx; ++i) {
            int k = i + nx * j;
            double fx, fy;
            if (i == 0)
                fx = 2.0 * (field[k + 1] - field[k]);
            else if (i == nx - 1)
                fx = 2.0 * (field[k - 1] - field[k]);
            else
                fx = field[k - 1] - 2.0 * field[k] + field[k + 1];
            if (j == 0)
                fy = 2.0 * (field[k + nx] - field[k]);
            else if (j == ny - 1)
                fy = 2.0 * (field[k - nx] - field[k]);
            else
                fy = field[k - nx] - 2.0 * field[k] + field[k + nx];
            out[k] = fx * ix2 + fy * iy2;
        }
    }
}

std::vector<double> laplacian(const Grid& g, std::span<const double> field) {
    std::vector<double> out(g.node_count());
    laplacian_apply(g, field, out);
    return out;
}

double grad_energy(const Grid& g, std::span<const double> w) {
    std::vector<double> lw = laplacian(g, w);
    double e = -inner(g, lw, w);
    return e > 0.0 ? e : 0.0;
}

namespace {

// Thomas sweep for the constant-coefficient Neumann Helmholtz rows:
//   row 0:     (shift + 2c) u0 - 2c u1
//   interior:  -c u_{i-1} + (shift + 2c) u_i - c u_{i+1}
//   row n-1:   -2c u_{n-2} + (shift + 2c) u_{n-1}
std::vector<double> thomas_const(int n, double shift, double c, std::span<const double> rhs) {
    std::vector<double> cp(n), d(rhs.begin(), rhs.end());
    double b = shift + 2.0 * c;
    cp[0] = -2.0 * c / b;
    d[0] /= b;
    for (int i = 1; i < n; ++i) {
        double a = (i == n - 1) ? -2.0 * c : -c;
        double cu = -c;
        double m = b - a * cp[i - 1];
        cp[i] = cu / m;
        d[i] = (d[i] - a * d[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i)
        d[i] -= cp[i] * d[i + 1];
    return d;
}

std::vector<double> thomas_diag(int n, std::span<const double> shift, double c,
                                std::span<const double> rhs) {
    std::vector<double> cp(n), d(rhs.begin(), rhs.end());
    double b0 = shift[0] + 2.0 * c;
    cp[0] = -2.0 * c / b0;
    d[0] /= b0;
    for (int i = 1; i < n; ++i) {
        double a = (i == n - 1) ? -2.0 * c : -c;
        double b = shift[i] + 2.0 * c;
        double m = b - a * cp[i - 1];
        cp[i] = -c / m;
        d[i] = (d[i] - a * d[i - 1]) / m;
    }
    for (int i = n - 2; i >= 0; --i)
        d[i] -= cp[i] * d[i + 1];
    return d;
}

// CG in the quadrature inner product for SPD applications.
template <class Apply>
std::vector<double> cg_solve(const Grid& g, std::span<const double> rhs, Apply&& apply,
                             double tol, int max_iter, const char* what) {
    int n = g.node_count();
    std::vector<double> x(n, 0.0), r(rhs.begin(), rhs.end()), p = r, ap(n);
    double rhs_inf = 0.0;
    for (double v : rhs) rhs_inf = std::max(rhs_inf, std::abs(v));
    if (rhs_inf == 0.0) return x;
    if (max_iter <= 0) max_iter = 20 * n + 200;

    double rr = inner(g, r, r);
    double res_inf = rhs_inf;
    for (int it = 0; it < max_iter; ++it) {
        apply(p, ap);
        double pap = inner(g, p, ap);
        double a = rr / pap;
        res_inf = 0.0;
        for (int k = 0; k < n; ++k) {
            x[k] += a * p[k];
            r[k] -= a * ap[k];
            res_inf = std::max(res_inf, std::abs(r[k]));
        }
        if (res_inf <= tol * rhs_inf) return x;
        double rr_new = inner(g, r, r);
        double beta = rr_new / rr;
        rr = rr_new;
        for (int k = 0; k < n; ++k)
            p[k] = r[k] + beta * p[k];
    }
    throw SolverError(std::string(what) + ": CG exceeded max iterations, residual_inf=" +
                          std::to_string(res_inf),
                      res_inf);
}

}  // namespace

std::vector<double> helmholtz_solve(const Grid& g, std::span<const double> rhs, double shift,
                                    double diffusivity, double tol, int max_iter) {
    if (!(shift > 0.0) || !(diffusivity > 0.0))
        throw std::invalid_argument("helmholtz_solve: shift and diffusivity must be positive");
    int n = g.node_count();
    if ((int)rhs.size() != n)
        throw std::invalid_argument("helmholtz_solve: rhs size does not match grid");

    if (g.dim == 1) {
        double c = diffusivity / (g.spacing[0] * g.spacing[0]);
        std::vector<double> u1 = thomas_const(n, shift, c, rhs);
        // mirrored sweep; the average commutes with grid reflection bit-exactly
        std::vector<double> rrev(rhs.rbegin(), rhs.rend());
        std::vector<double> u2 = thomas_const(n, shift, c, rrev);
        for (int i = 0; i < n; ++i)
            u1[i] = 0.5 * (u1[i] + u2[n - 1 - i]);
        return u1;
    }

    return cg_solve(
        g, rhs,
        [&](std::span<const double> p, std::span<double> ap) {
            laplacian_apply(g, p, ap);
            for (int k = 0; k < n; ++k)
                ap[k] = -diffusivity * ap[k] + shift * p[k];
        },
        tol, max_iter, "helmholtz_solve");
}

std::vector<double> helmholtz_solve_diag(const Grid& g, std::span<const double> rhs,
                                         std::span<const double> shift, double diffusivity,
                                         double tol, int max_iter) {
    int n = g.node_count();
    if ((int)rhs.size() != n || (int)shift.size() != n)
        throw std::invalid_argument("helmholtz_solve_diag: size mismatch");
    if (g.dim == 1) {
        double c = diffusivity / (g.spacing[0] * g.spacing[0]);
        return thomas_diag(n, shift, c, rhs);
    }
    double smin = *std::min_element(shift.begin(), shift.end());
    if (!(smin > 0.0))
        throw std::invalid_argument("helmholtz_solve_diag: 2D solve needs a positive shift field");
    return cg_solve(
        g, rhs,
        [&](std::span<const double> p, std::span<double> ap) {
            laplacian_apply(g, p, ap);
            for (int k = 0; k < n; ++k)
                ap[k] = -diffusivity * ap[k] + shift[k] * p[k];
        },
        tol, max_iter, "helmholtz_solve_diag");
}

}  // namespace ecotone
