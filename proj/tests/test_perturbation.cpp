#include <doctest.h>

#include <cmath>

#include "ecotone/equilibria.hpp"
#include "ecotone/perturbation.hpp"
#include "ecotone/stepper.hpp"

using namespace ecotone;

namespace {

ForcedOdeProblem double_well() {
    ForcedOdeProblem p;
    p.n = 1;
    p.field = [](const Vec3& u) { return Vec3{-(u[0] * u[0] * u[0] - u[0]), 0.0, 0.0}; };
    p.equilibria = {{-1.0, 0, 0}, {0.0, 0, 0}, {1.0, 0, 0}};
    p.u0 = {0.1, 0.0, 0.0};
    p.horizon = 100.0;
    return p;
}

void add_sin_forcing(ForcedOdeProblem& p, double eps) {
    p.forcing = [eps](double t) { return Vec3{eps * std::sin(t), 0.0, 0.0}; };
    p.forcing_deriv = [eps](double t) { return Vec3{eps * std::cos(t), 0.0, 0.0}; };
    p.epsilon = eps;
}

}  // namespace

TEST_CASE("unforced start at an equilibrium stays put") {
    auto p = double_well();
    p.u0 = {1.0, 0.0, 0.0};
    p.horizon = 10.0;
    auto traj = run_perturbed_ode(p, 1e-2);
    CHECK(traj.int_du <= 1e-12);
    CHECK(traj.u.back()[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("monotone scalar settling has path length equal to displacement") {
    auto p = double_well();
    auto traj = run_perturbed_ode(p, 1e-2);
    CHECK(traj.int_du == doctest::Approx(0.9).epsilon(1e-3));
    CHECK(traj.u.back()[0] == doctest::Approx(1.0).epsilon(1e-6));
}

TEST_CASE("second-order double-well written first-order converges to a well") {
    ForcedOdeProblem p;
    p.n = 2;
    p.field = [](const Vec3& u) {
        return Vec3{u[1], -u[1] - (u[0] * u[0] * u[0] - u[0]), 0.0};
    };
    p.equilibria = {{-1.0, 0.0, 0}, {1.0, 0.0, 0}};
    p.u0 = {0.3, 0.0, 0.0};
    p.horizon = 60.0;
    auto traj = run_perturbed_ode(p, 1e-2);
    CHECK(std::abs(traj.u.back()[0]) == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(traj.u.back()[1] == doctest::Approx(0.0).scale(1.0).epsilon(1e-6));
}

TEST_CASE("autonomous settling is Cauchy in the horizon") {
    auto p = double_well();
    p.horizon = 200.0;
    double i200 = run_perturbed_ode(p, 1e-2).int_du;
    p.horizon = 400.0;
    double i400 = run_perturbed_ode(p, 1e-2).int_du;
    CHECK(i400 >= i200 - 1e-12);
    CHECK(i400 - i200 < 1e-3);
}

TEST_CASE("declared forcing bound is checked against samples") {
    auto p = double_well();
    add_sin_forcing(p, 0.05);
    p.epsilon = 0.01;  // understated declaration
    p.horizon = 10.0;
    CHECK_THROWS_AS(run_perturbed_ode(p, 1e-2), std::invalid_argument);
    p.forcing_deriv = nullptr;
    p.epsilon = 0.05;
    CHECK_THROWS_AS(run_perturbed_ode(p, 1e-2), std::invalid_argument);
}

TEST_CASE("segmentation covers the horizon and reports bounded out-time") {
    auto p = double_well();
    add_sin_forcing(p, 0.05);
    auto traj = run_perturbed_ode(p, 1e-2);
    auto segs = segment_neighborhoods(p, traj, 0.1);
    double total = 0.0;
    for (size_t i = 0; i < segs.size(); ++i) {
        total += segs[i].t1 - segs[i].t0;
        if (i) CHECK(segs[i].t0 == doctest::Approx(segs[i - 1].t1));
    }
    CHECK(total == doctest::Approx(p.horizon).epsilon(1e-9));
    CHECK(out_time(segs) < p.horizon);
}

TEST_CASE("halving the forcing amplitude halves the forcing variation exactly") {
    auto a = double_well();
    add_sin_forcing(a, 0.05);
    a.horizon = 50.0;
    auto b = double_well();
    add_sin_forcing(b, 0.025);
    b.horizon = 50.0;
    auto ta = run_perturbed_ode(a, 1e-2);
    auto tb = run_perturbed_ode(b, 1e-2);
    CHECK(tb.int_dh == doctest::Approx(0.5 * ta.int_dh).epsilon(1e-12));
}

TEST_CASE("tv_check fits the affine envelope for admissible forcing") {
    auto p = double_well();
    add_sin_forcing(p, 0.05);
    std::vector<double> horizons = {100.0, 200.0, 400.0};
    auto rep = tv_check(p, horizons, 1e-2);
    CHECK(rep.pass);
    CHECK_FALSE(rep.regime_exit);
    CHECK(rep.C2 >= 0.0);
    for (double ot : rep.out_times)
        CHECK(ot == doctest::Approx(rep.out_times.front()).epsilon(0.05));
}

TEST_CASE("tv_check with no forcing fits a flat envelope") {
    auto p = double_well();
    std::vector<double> horizons = {100.0, 200.0, 400.0};
    auto rep = tv_check(p, horizons, 1e-2);
    CHECK(rep.pass);
    CHECK(rep.C2 == doctest::Approx(0.0).scale(1.0));
    CHECK(rep.C1 == doctest::Approx(0.9).epsilon(1e-2));
}

TEST_CASE("tv_check reports regime exit above the amplitude threshold") {
    auto p = double_well();
    add_sin_forcing(p, 1.0);
    std::vector<double> horizons = {50.0, 100.0, 150.0};
    auto rep = tv_check(p, horizons, 1e-2);
    CHECK(rep.regime_exit);
    CHECK_FALSE(rep.pass);
    std::vector<double> two = {50.0, 100.0};
    CHECK_THROWS_AS(tv_check(p, two, 1e-2), std::invalid_argument);
}

TEST_CASE("node stabilization report on an equilibrium trajectory is at noise level") {
    Grid g = make_grid_1d(1.0, 65);
    SystemParams p = make_params(0.01, bistable_cubic(), g);
    auto roots = ode_roots(p.nl, -2.0, 2.0);
    std::vector<int> labels(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) labels[k] = g.position(k)[0] <= 0.5 ? 0 : 2;
    auto eq = partition_equilibrium(labels, roots, p);

    ProbeConfig probes;
    probes.nodes = {8, 32, 56};
    StepperConfig cfg;
    auto rec = simulate(to_state(eq), p, cfg, 1.0, probes);
    auto rep = node_stabilization_report(rec, g, probes.nodes, p.alpha);
    for (size_t i = 0; i < rep.nodes.size(); ++i) {
        CHECK(rep.int_vt[i] <= 1e-8);
        CHECK(rep.int_vtt[i] <= 1e-8);
    }
    CHECK_THROWS_AS(node_stabilization_report(rec, g, {5}, p.alpha), std::invalid_argument);
}

TEST_CASE("decoupled per-node variation equals the settling displacement") {
    // alpha = 0: each node follows the scalar damped flow independently
    Grid g = make_grid_1d(1.0, 9);
    SystemParams p = make_params(0.0, bistable_cubic(), g);
    FieldState init = zero_state(g);
    for (auto& v : init.v) v = 0.3;
    ProbeConfig probes;
    probes.nodes = {4};
    StepperConfig cfg;
    auto rec = simulate(init, p, cfg, 100.0, probes);
    auto rep = node_stabilization_report(rec, g, probes.nodes, 0.0);
    CHECK(rep.alpha_int_wt[0] == 0.0);
    // overdamped-ish approach: total variation close to |1 - 0.3| with a
    // small overshoot allowance
    CHECK(rep.int_vt[0] >= 0.7 - 1e-3);
    CHECK(rep.int_vt[0] <= 1.0);
}
