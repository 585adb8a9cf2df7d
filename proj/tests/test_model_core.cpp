#include <doctest.h>

#include <cmath>
#include <random>

#include "ecotone/forest.hpp"
#include "ecotone/grid.hpp"
#include "ecotone/nonlinearity.hpp"
#include "ecotone/system.hpp"

using namespace ecotone;

TEST_CASE("trapezoid quadrature is exact for constants and linear fields") {
    Grid g = make_grid_1d(2.0, 41);
    std::vector<double> one(g.node_count(), 1.0);
    CHECK(integrate(g, one) == doctest::Approx(2.0).epsilon(1e-14));

    std::vector<double> lin(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) lin[k] = 3.0 * g.position(k)[0] - 1.0;
    CHECK(integrate(g, lin) == doctest::Approx(3.0 * 2.0 - 2.0).epsilon(1e-13));  // int = 4

    Grid g2 = make_grid(2, {1.5, 2.0}, {11, 13});
    std::vector<double> one2(g2.node_count(), 1.0);
    CHECK(integrate(g2, one2) == doctest::Approx(3.0).epsilon(1e-13));
}

TEST_CASE("grid construction rejects bad parameters") {
    CHECK_THROWS_AS(make_grid_1d(1.0, 2), std::invalid_argument);
    CHECK_THROWS_AS(make_grid_1d(-1.0, 11), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(3, {1, 1}, {5, 5}), std::invalid_argument);
    CHECK_THROWS_AS(make_grid(2, {1, 1}, {5, 2}), std::invalid_argument);
}

TEST_CASE("catalog nonlinearities satisfy the standing assumptions") {
    auto rep_m = validate_assumptions(monotone_cubic(), -5.0, 5.0);
    CHECK(rep_m.all_pass());
    CHECK(rep_m.monotone);
    CHECK(rep_m.kappa0 >= 1.0);

    auto rep_b = validate_assumptions(bistable_cubic(), -5.0, 5.0);
    CHECK(rep_b.all_pass());
    CHECK_FALSE(rep_b.monotone);
    CHECK(rep_b.slope.margin >= 0.0);  // f' >= -K with K=1, tight at v=0
    CHECK(std::abs(rep_b.slope.worst_v) < 0.01);
}

TEST_CASE("assumption validation flags violations and bad input") {
    CHECK_THROWS_AS(validate_assumptions(monotone_cubic(), 1.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(validate_assumptions(monotone_cubic(), -1.0, 1.0, 50), std::invalid_argument);

    // beta0 overstated -> damping check fails
    auto spec = monotone_cubic();
    spec.beta0 = 2.0;
    auto rep = validate_assumptions(spec, -1.0, 1.0);
    CHECK_FALSE(rep.damping.pass);
    CHECK(rep.damping.margin == doctest::Approx(-1.0));

    // wrong antiderivative -> consistency check fails
    auto bad = monotone_cubic();
    bad.F = [](double v) { return 0.5 * v * v; };
    CHECK_FALSE(validate_assumptions(bad, -2.0, 2.0).consistency.pass);
}

TEST_CASE("polynomial spec evaluates Horner forms and exact derivatives") {
    auto s = polynomial_spec({0.0, 1.0, 0.0, 2.0}, {1.0, 0.5}, 0.5, 0.0, 0.1, 1.0, 0.0);
    CHECK(s.f(2.0) == doctest::Approx(2.0 + 16.0));
    CHECK(s.fp(2.0) == doctest::Approx(1.0 + 24.0));
    CHECK(s.F(1.0) == doctest::Approx(0.5 + 0.5));
    CHECK(s.phi(2.0) == doctest::Approx(2.0));
    // R(y) = int_0^y (1 + 0.5 s) s ds = y^2/2 + y^3/6
    CHECK(s.R(1.0) == doctest::Approx(0.5 + 1.0 / 6.0));
}

TEST_CASE("forest reduction with unit parameters and constant mortality") {
    ForestParams p{1, 1, 1, 1, 1, 1, [](double) { return 1.0; }, [](double) { return 0.0; }};
    auto red = forest_reduce(p);
    CHECK(red.nl.phi(0.7) == doctest::Approx(3.0));
    CHECK(red.nl.f(0.7) == doctest::Approx(2.0 * 0.7));
    CHECK(red.coupling == doctest::Approx(1.0));
    CHECK(red.heat.diffusivity == doctest::Approx(1.0));
    CHECK(red.heat.damping == doctest::Approx(1.0));
    // constant steady state: vt = 0 recovers u = h v / f = v
    CHECK(red.recover_u(0.42, 0.0) == doctest::Approx(0.42));
}

TEST_CASE("forest reduction round-trip identity on random parameters") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> pos(0.2, 3.0), val(-2.0, 2.0);
    for (int trial = 0; trial < 20; ++trial) {
        double g0 = pos(rng), g1 = val(rng) * 0.1;
        ForestParams p{pos(rng), pos(rng), pos(rng), pos(rng), pos(rng), pos(rng),
                       [g0, g1](double v) { return g0 + g1 * v * v; },
                       [g1](double v) { return 2.0 * g1 * v; }};
        auto red = forest_reduce(p);
        for (int s = 0; s < 20; ++s) {
            double v = val(rng), vt = val(rng), w = val(rng);
            // canonical right-hand side of the reduced oscillator
            double canon = red.coupling * w - red.nl.phi(v) * vt - red.nl.f(v);
            // eliminated form: vtt = f u' - h vt with u = (vt + h v)/f
            double u = (vt + p.h * v) / p.f;
            double udot = p.beta * p.delta * w - (p.gamma(v) + p.f) * u;
            double direct = p.f * udot - p.h * vt;
            CHECK(canon == doctest::Approx(direct).epsilon(1e-12));
        }
    }
}

TEST_CASE("forest parameter validation") {
    ForestParams p{1, 1, 1, 1, 0.0, 1, [](double) { return 1.0; }, [](double) { return 0.0; }};
    CHECK_THROWS_AS(check_forest(p), std::invalid_argument);
}

TEST_CASE("reduced forest nonlinearity passes assumption validation") {
    ForestParams p{1, 1, 1, 1, 1, 1, [](double) { return 1.0; }, [](double) { return 0.0; }};
    auto red = forest_reduce(p);
    auto rep = validate_assumptions(red.nl, -20.0, 20.0);
    CHECK(rep.all_pass());
}

TEST_CASE("state validation catches size and finiteness errors") {
    Grid g = make_grid_1d(1.0, 11);
    FieldState s = zero_state(g);
    CHECK_NOTHROW(check_state(s, g));
    s.v.pop_back();
    CHECK_THROWS_AS(check_state(s, g), std::invalid_argument);
    s = zero_state(g);
    s.w[3] = std::nan("");
    CHECK_THROWS_AS(check_state(s, g), std::invalid_argument);
}
