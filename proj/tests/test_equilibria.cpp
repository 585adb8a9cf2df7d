#include <doctest.h>

#include <cmath>
#include <random>

#include "ecotone/equilibria.hpp"
#include "ecotone/operators.hpp"

using namespace ecotone;

TEST_CASE("ode_roots resolves the bistable and monotone catalogs") {
    auto rb = ode_roots(bistable_cubic(), -2.0, 2.0);
    REQUIRE(rb.roots.size() == 3);
    CHECK(rb.roots[0].u == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(rb.roots[1].u == doctest::Approx(0.0).scale(1.0).epsilon(1e-12));
    CHECK(rb.roots[2].u == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(rb.roots[0].fprime == doctest::Approx(2.0));
    CHECK(rb.roots[1].fprime == doctest::Approx(-1.0));
    for (const auto& r : rb.roots) CHECK(r.hyperbolic);
    CHECK(rb.min_gap() == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(rb.nearest(0.8) == 2);

    auto rm = ode_roots(monotone_cubic(), -2.0, 2.0);
    REQUIRE(rm.roots.size() == 1);
    CHECK(rm.roots[0].u == doctest::Approx(0.0).scale(1.0));
    CHECK(rm.roots[0].fprime == doctest::Approx(1.0));
}

TEST_CASE("ode_roots flags a non-hyperbolic double root") {
    auto sq = polynomial_spec({0.0, 0.0, 1.0}, {1.0}, 1.0, 0.0, 0.0, 0.0, 1.0);  // f = v^2
    auto rs = ode_roots(sq, -1.0, 1.0, 1001);  // odd count places a node at 0
    REQUIRE(rs.roots.size() == 1);
    CHECK_FALSE(rs.roots[0].hyperbolic);
    CHECK(ode_roots(sq, -1.0, 1.0).min_gap() > 1e10);  // single root -> infinite gap
    CHECK_THROWS_AS(ode_roots(sq, -1.0, 1.0, 10), std::invalid_argument);
}

TEST_CASE("invert_f hits hand-computed preimages of the monotone cubic") {
    auto s = monotone_cubic();
    CHECK(invert_f(s, 0.0) == doctest::Approx(0.0).scale(1.0));
    CHECK(invert_f(s, 2.0) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(invert_f(s, 10.0) == doctest::Approx(2.0).epsilon(1e-13));
    CHECK_THROWS_AS(invert_f(bistable_cubic(), 0.5), std::domain_error);
}

TEST_CASE("monotone equilibrium collapses to zero with a positive margin") {
    Grid g = make_grid_1d(1.0, 65);
    SystemParams p = make_params(0.5, monotone_cubic(), g);
    std::vector<double> guess(g.node_count(), 0.3);
    auto eq = solve_monotone_equilibrium(p, guess);
    for (int k = 0; k < g.node_count(); ++k) {
        CHECK(std::abs(eq.v0[k]) < 1e-10);
        CHECK(std::abs(eq.w0[k]) < 1e-10);
    }
    CHECK(eq.residual <= 1e-10);
    CHECK(eq.margin == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(eq.source == "monotone-elliptic");
}

TEST_CASE("monotone margin agrees between the two linearization forms") {
    Grid g = make_grid_1d(1.0, 65);
    SystemParams p = make_params(0.5, monotone_cubic(), g);
    std::vector<double> v0(g.node_count(), 0.0);
    double m1 = hyperbolicity_margin(v0, p);
    double m2 = hyperbolicity_margin_elliptic(v0, p);
    CHECK(m1 == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(m1 == doctest::Approx(m2).epsilon(1e-6));
}

TEST_CASE("margin reduces to |f'| for decoupled constant profiles") {
    Grid g = make_grid_1d(1.0, 33);
    SystemParams p = make_params(0.0, bistable_cubic(), g);
    std::vector<double> at_one(g.node_count(), 1.0);
    CHECK(hyperbolicity_margin(at_one, p) == doctest::Approx(2.0).epsilon(1e-7));
    // indefinite but nonsingular diagonal: f'(0) = -1
    std::vector<double> at_zero(g.node_count(), 0.0);
    CHECK(hyperbolicity_margin(at_zero, p) == doctest::Approx(1.0).epsilon(1e-7));
}

TEST_CASE("equilibrium residual on hand-evaluated fields") {
    Grid g = make_grid_1d(1.0, 41);
    SystemParams p = make_params(0.01, bistable_cubic(), g);
    // constant root profile: residual = alpha * |u| exactly
    std::vector<double> v(g.node_count(), 1.0);
    CHECK(equilibrium_residual(v, p) == doctest::Approx(0.01).epsilon(1e-10));
}

TEST_CASE("trivial partition matches the scalar correction sqrt(1.01) - 1") {
    Grid g = make_grid_1d(1.0, 41);
    SystemParams p = make_params(0.01, bistable_cubic(), g);
    auto roots = ode_roots(p.nl, -2.0, 2.0);
    std::vector<int> labels(g.node_count(), 2);  // all nodes at u = +1
    auto eq = partition_equilibrium(labels, roots, p);
    double c = std::sqrt(1.01);
    for (int k = 0; k < g.node_count(); ++k)
        CHECK(eq.v0[k] == doctest::Approx(c).epsilon(1e-10));
    CHECK(eq.correction_norm == doctest::Approx(c - 1.0).epsilon(1e-8));
    CHECK(eq.residual <= 1e-11);
    CHECK(eq.source == "partition");
}

TEST_CASE("alpha = 0 partition returns the uncorrected profile") {
    Grid g = make_grid_1d(1.0, 33);
    SystemParams p = make_params(0.0, bistable_cubic(), g);
    auto roots = ode_roots(p.nl, -2.0, 2.0);
    std::vector<int> labels(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) labels[k] = g.position(k)[0] < 0.5 ? 0 : 2;
    auto eq = partition_equilibrium(labels, roots, p);
    CHECK(eq.correction_norm <= 1e-12);
}

TEST_CASE("partition constructor enforces its preconditions") {
    Grid g = make_grid_1d(1.0, 33);
    auto roots = ode_roots(bistable_cubic(), -2.0, 2.0);
    std::vector<int> labels(g.node_count(), 0);
    SystemParams big = make_params(0.2, bistable_cubic(), g);
    CHECK_THROWS_AS(partition_equilibrium(labels, roots, big), std::domain_error);

    SystemParams p = make_params(0.01, bistable_cubic(), g);
    std::vector<int> bad(g.node_count(), 7);
    CHECK_THROWS_AS(partition_equilibrium(bad, roots, p), std::domain_error);

    auto sq = polynomial_spec({0.0, 0.0, 1.0}, {1.0}, 1.0, 0.0, 0.0, 0.0, 1.0);
    auto rs = ode_roots(sq, -1.0, 1.0, 1001);
    SystemParams psq = make_params(0.01, sq, g);
    std::vector<int> zero_label(g.node_count(), 0);
    CHECK_THROWS_AS(partition_equilibrium(zero_label, rs, psq), std::domain_error);
}

TEST_CASE("two-part split scales linearly in alpha") {
    Grid g = make_grid_1d(1.0, 65);
    auto roots = ode_roots(bistable_cubic(), -2.0, 2.0);
    std::vector<int> labels(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) labels[k] = g.position(k)[0] <= 0.5 ? 0 : 2;
    double prev_ratio = -1.0;
    for (double a : {1e-2, 5e-3, 2.5e-3}) {
        SystemParams p = make_params(a, bistable_cubic(), g);
        auto eq = partition_equilibrium(labels, roots, p);
        double ratio = eq.correction_norm / a;
        CHECK(ratio <= 2.0);  // observed C below 2
        if (prev_ratio > 0.0)
            CHECK(ratio == doctest::Approx(prev_ratio).epsilon(0.25));
        prev_ratio = ratio;
    }
}

TEST_CASE("Newton from a noisy seed lands on the same equilibrium") {
    Grid g = make_grid_1d(1.0, 65);
    double a = 1e-2;
    SystemParams p = make_params(a, bistable_cubic(), g);
    auto roots = ode_roots(p.nl, -2.0, 2.0);
    std::vector<int> labels(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) labels[k] = g.position(k)[0] <= 0.5 ? 0 : 2;
    auto eq = partition_equilibrium(labels, roots, p);

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> d(-a, a);
    std::vector<double> noisy(g.node_count());
    for (int k = 0; k < g.node_count(); ++k)
        noisy[k] = (labels[k] == 0 ? -1.0 : 1.0) + d(rng);
    auto eq2 = equilibrium_from_seed(noisy, p);
    double dist = 0.0;
    for (int k = 0; k < g.node_count(); ++k)
        dist = std::max(dist, std::abs(eq.v0[k] - eq2.v0[k]));
    CHECK(dist <= 1e-9);
}

TEST_CASE("near-homogeneous construction: empty island and measure scaling") {
    Grid g = make_grid_1d(1.0, 201);
    SystemParams p = make_params(0.2, bistable_cubic(), g);

    auto eq0 = near_homogeneous_equilibrium(1.0, -1.0, {}, p);
    CHECK(eq0.correction_norm <= 1e-10);
    // the base level itself is the constant equilibrium f(c) = alpha*c
    CHECK(eq0.v0[0] == doctest::Approx(std::sqrt(1.2)).epsilon(1e-10));

    // shrinking the island shrinks the correction
    std::vector<int> small_island = {100, 101}, island = {99, 100, 101, 102};
    auto eq1 = near_homogeneous_equilibrium(1.0, -1.0, island, p);
    auto eq2 = near_homogeneous_equilibrium(1.0, -1.0, small_island, p);
    CHECK(eq1.residual <= 1e-10);
    CHECK(eq2.correction_norm < eq1.correction_norm);
    CHECK(eq2.correction_norm / eq1.correction_norm == doctest::Approx(0.6).epsilon(0.5));
    CHECK(eq1.source == "near-homogeneous");

    // oversized island violates the measure cap
    std::vector<int> huge;
    for (int k = 40; k < 160; ++k) huge.push_back(k);
    CHECK_THROWS_AS(near_homogeneous_equilibrium(1.0, -1.0, huge, p), std::domain_error);
    // mismatched levels rejected
    CHECK_THROWS_AS(near_homogeneous_equilibrium(1.0, 0.5, small_island, p), std::domain_error);
}

TEST_CASE("basin labels follow the damped double-well flow") {
    auto nl = bistable_cubic();
    auto roots = ode_roots(nl, -2.0, 2.0);
    CHECK(basin_label(nl, roots, 0.1, 0.0) == 2);
    CHECK(basin_label(nl, roots, -0.1, 0.0) == 0);
    CHECK(basin_label(nl, roots, 0.0, 0.0) == 1);  // on the ridge
    CHECK(basin_label(nl, roots, 1.5, 0.0) == 2);
}
