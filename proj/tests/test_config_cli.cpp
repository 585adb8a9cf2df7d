#include <doctest.h>

#include <string>

#include "ecotone/config.hpp"
#include "ecotone/convergence.hpp"
#include "ecotone/io.hpp"

using namespace ecotone;

namespace {

std::string msg_of(const std::function<void()>& fn) {
    try {
        fn();
    } catch (const std::exception& e) {
        return e.what();
    }
    return "";
}

}  // namespace

TEST_CASE("config parser round-trips a full document") {
    std::string text =
        "# run description\n"
        "[model]\n"
        "catalog = bistable\n"
        "alpha = 0.01\n"
        "[grid]\n"
        "nx = 129\n"
        "lx = 2.0\n"
        "[stepper]\n"
        "dt = 5e-4\n"
        "horizon = 25\n"
        "[experiment]\n"
        "h_list = 0.05, 0.1\n"
        "probe_nodes = 1, 64, 127\n"
        "[output]\n"
        "dir = /tmp/x\n";
    auto c = parse_config_text(text);
    CHECK(c.catalog == "bistable");
    CHECK(c.alpha == doctest::Approx(0.01));
    CHECK(c.nx == 129);
    CHECK(c.lx == doctest::Approx(2.0));
    CHECK(c.dt == doctest::Approx(5e-4));
    CHECK(c.h_list.size() == 2);
    CHECK(c.probe_nodes == std::vector<int>{1, 64, 127});
    CHECK(c.out_dir == "/tmp/x");

    auto p = config_params(c);
    CHECK(p.grid.node_count() == 129);
    CHECK(p.nl.name == "bistable_cubic");
}

TEST_CASE("unknown keys and sections are rejected by name") {
    std::string m = msg_of([] { parse_config_text("[stepper]\nstep = 1\n"); });
    CHECK(m.find("stepper.step") != std::string::npos);
    CHECK_THROWS_AS(parse_config_text("[stuff]\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("dt = 1\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[stepper]\ndt\n"), ConfigError);
}

TEST_CASE("validation names the offending field") {
    std::string m = msg_of([] { parse_config_text("[stepper]\ndt = -1e-3\n"); });
    CHECK(m.find("stepper.dt") != std::string::npos);
    m = msg_of([] { parse_config_text("[grid]\nnx = 2\n"); });
    CHECK(m.find("grid.nx") != std::string::npos);
    m = msg_of([] { parse_config_text("[stepper]\ndt = fast\n"); });
    CHECK(m.find("stepper.dt") != std::string::npos);
    CHECK_THROWS_AS(parse_config_text("[model]\ncatalog = cubic\n"), ConfigError);
    CHECK_THROWS_AS(parse_config_text("[model]\ncatalog = polynomial\n"), ConfigError);
}

TEST_CASE("missing config file is a configuration error") {
    CHECK_THROWS_AS(parse_config("/nonexistent/path.ini"), ConfigError);
}

TEST_CASE("fmt17 round-trips doubles") {
    for (double x : {1.0 / 3.0, 2.5e-17, -1.234567890123456789e8}) {
        CHECK(std::stod(fmt17(x)) == x);
    }
}

TEST_CASE("convergence studies reject too few levels") {
    std::vector<int> two = {17, 33};
    CHECK_THROWS_AS(spatial_convergence(two), std::invalid_argument);
    std::vector<double> dts = {1e-2, 5e-3};
    CHECK_THROWS_AS(temporal_convergence(dts), std::invalid_argument);
}
