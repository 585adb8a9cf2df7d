#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <numbers>
#include <random>

#include <CLI11.hpp>
#include <json.hpp>

#include "ecotone/config.hpp"
#include "ecotone/convergence.hpp"
#include "ecotone/diagnostics.hpp"
#include "ecotone/equilibria.hpp"
#include "ecotone/forest.hpp"
#include "ecotone/io.hpp"
#include "ecotone/operators.hpp"
#include "ecotone/perturbation.hpp"
#include "ecotone/stepper.hpp"

namespace fs = std::filesystem;
using namespace ecotone;

namespace {

struct CliState {
    std::string config_path;
    std::string out_override;
    std::uint64_t seed = 12345;
    bool quiet = false;
};

void info(const CliState& st, const std::string& msg) {
    if (!st.quiet) std::cout << msg << '\n';
}

RunConfig load(const CliState& st) {
    RunConfig c = st.config_path.empty() ? parse_config_text("") : parse_config(st.config_path);
    if (!st.out_override.empty()) c.out_dir = st.out_override;
    fs::create_directories(c.out_dir);
    return c;
}

StepperConfig stepper_of(const RunConfig& c) {
    StepperConfig cfg;
    cfg.dt = c.dt;
    cfg.heat_tol = c.heat_tol;
    cfg.snapshot_stride = c.snapshot_stride;
    return cfg;
}

/// Low-mode cosine combination: smooth, Neumann-compatible, bounded by ~1.
std::vector<double> random_field(const Grid& g, std::mt19937_64& rng) {
    const double pi = std::numbers::pi;
    std::uniform_real_distribution<double> coef(-0.5, 0.5);
    std::array<double, 5> ax, ay;
    for (auto& a : ax) a = coef(rng);
    for (auto& a : ay) a = coef(rng);
    std::vector<double> f(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) {
        auto p = g.position(k);
        double s = 0.0;
        for (int m = 0; m < 5; ++m) {
            double cx = std::cos(m * pi * p[0] / g.extent[0]);
            double cy = g.dim == 2 ? std::cos(m * pi * p[1] / g.extent[1]) : 1.0;
            s += ax[m] * cx * (g.dim == 2 ? ay[m] * cy : 1.0);
        }
        f[k] = s / 2.5;
    }
    return f;
}

/// Odd-symmetric interface profile around `center`: exact antisymmetry is kept
/// by construction instead of trusting tanh(-x) == -tanh(x) in libm.
std::vector<double> interface_profile(const Grid& g, double center, double steepness) {
    std::vector<double> v(g.node_count());
    for (int k = 0; k < g.node_count(); ++k) {
        double z = g.position(k)[0] - center;
        double m = std::tanh(std::abs(z) / steepness);
        v[k] = z < 0 ? -m : (z > 0 ? m : 0.0);
    }
    return v;
}

std::vector<int> interface_labels(const SystemParams& p, const OdeRootSet& roots,
                                  const FieldState& s) {
    std::vector<int> labels(p.grid.node_count());
    for (int k = 0; k < p.grid.node_count(); ++k)
        labels[k] = basin_label(p.nl, roots, s.v[k], s.vt[k]);
    return labels;
}

void finish(const RunConfig& c, const std::chrono::steady_clock::time_point& t0) {
    double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    write_manifest(c.out_dir, c.raw_text, wall);
}

int cmd_simulate(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    SystemParams p = config_params(c);
    std::mt19937_64 rng(st.seed);
    FieldState init = zero_state(p.grid);
    init.v = random_field(p.grid, rng);
    init.vt = random_field(p.grid, rng);
    init.w = random_field(p.grid, rng);

    ProbeConfig probes;
    probes.h_list = c.h_list;
    probes.nodes = c.probe_nodes;
    probes.snapshot_every = 10;
    auto rec = simulate(init, p, stepper_of(c), c.horizon, probes);
    write_trajectory_csv(c.out_dir + "/trajectory.csv", rec);
    if (!c.h_list.empty()) write_seminorm_csv(c.out_dir + "/seminorms.csv", rec, c.h_list);
    for (size_t i = 0; i < rec.snapshots.size(); ++i)
        write_snapshot_csv(c.out_dir + "/snapshot_" + std::to_string(i) + ".csv", p.grid,
                           rec.snapshots[i]);
    finish(c, t0);
    if (!rec.completed) {
        std::cerr << "simulation aborted: " << rec.error << '\n';
        return 3;
    }
    info(st, "trajectory written to " + c.out_dir);
    return 0;
}

int cmd_equilibrium(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    SystemParams p = config_params(c);
    std::vector<double> guess(p.grid.node_count(), 0.0);
    auto eq = solve_monotone_equilibrium(p, guess);
    write_equilibrium_csv(c.out_dir + "/equilibrium.csv", p.grid, eq);
    write_equilibrium_json(c.out_dir + "/equilibrium.json", eq, c.alpha);
    finish(c, t0);
    info(st, "residual " + fmt17(eq.residual) + ", margin " + fmt17(eq.margin));
    return 0;
}

int cmd_partition_eq(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    SystemParams p = config_params(c);
    auto roots = ode_roots(p.nl, -5.0, 5.0);
    // stable wells: leftmost and rightmost roots with positive slope
    int left = -1, right = -1;
    for (size_t i = 0; i < roots.roots.size(); ++i)
        if (roots.roots[i].hyperbolic && roots.roots[i].fprime > 0.0) {
            if (left < 0) left = (int)i;
            right = (int)i;
        }
    if (left < 0) throw std::domain_error("partition-eq: no stable root available");
    std::vector<int> labels(p.grid.node_count());
    for (int k = 0; k < p.grid.node_count(); ++k)
        labels[k] = p.grid.position(k)[0] <= c.split_at ? left : right;
    auto eq = partition_equilibrium(labels, roots, p);
    write_equilibrium_csv(c.out_dir + "/equilibrium.csv", p.grid, eq);
    write_equilibrium_json(c.out_dir + "/equilibrium.json", eq, c.alpha);
    finish(c, t0);
    info(st, "correction " + fmt17(eq.correction_norm) + ", residual " + fmt17(eq.residual));
    return 0;
}

int cmd_near_homog_eq(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    SystemParams p = config_params(c);
    std::vector<int> island;
    for (int k = 0; k < p.grid.node_count(); ++k) {
        double x = p.grid.position(k)[0];
        if (x >= c.omega2_lo && x <= c.omega2_hi) island.push_back(k);
    }
    auto eq = near_homogeneous_equilibrium(c.vbar, c.vtilde, island, p);
    write_equilibrium_csv(c.out_dir + "/equilibrium.csv", p.grid, eq);
    write_equilibrium_json(c.out_dir + "/equilibrium.json", eq, c.alpha);
    finish(c, t0);
    info(st, "correction " + fmt17(eq.correction_norm) + ", residual " + fmt17(eq.residual));
    return 0;
}

int cmd_stabilize(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    SystemParams p = config_params(c);
    FieldState init = zero_state(p.grid);
    init.v = interface_profile(p.grid, c.split_at, c.steepness);

    auto roots = ode_roots(p.nl, -5.0, 5.0);
    auto labels = interface_labels(p, roots, init);
    auto eq = partition_equilibrium(labels, roots, p);

    ProbeConfig probes;
    probes.h_list = c.h_list;
    auto rec = simulate(init, p, stepper_of(c), c.horizon, probes);
    write_trajectory_csv(c.out_dir + "/trajectory.csv", rec);
    write_snapshot_csv(c.out_dir + "/final.csv", p.grid, rec.final_state);
    write_equilibrium_csv(c.out_dir + "/equilibrium.csv", p.grid, eq);
    if (!rec.completed) {
        finish(c, t0);
        std::cerr << "simulation aborted: " << rec.error << '\n';
        return 3;
    }

    std::vector<double> diff(p.grid.node_count());
    for (int k = 0; k < p.grid.node_count(); ++k)
        diff[k] = rec.final_state.v[k] - eq.v0[k];
    double inf = std::numeric_limits<double>::infinity();
    double d1 = lp_norm(p.grid, diff, 1.0), d2 = lp_norm(p.grid, diff, 2.0),
           dinf = lp_norm(p.grid, diff, inf);
    nlohmann::json j{{"l1_distance", d1},
                     {"l2_distance", d2},
                     {"sup_distance", dinf},
                     {"tolerance", c.tolerance},
                     {"within_tolerance", d1 <= c.tolerance}};
    std::ofstream(c.out_dir + "/stabilize.json") << j.dump(2) << '\n';
    finish(c, t0);
    info(st, "L1 distance to the partition equilibrium: " + fmt17(d1));
    return 0;
}

int cmd_lipschitz_contrast(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    SystemParams p = config_params(c);
    std::vector<double> hs = c.h_list;
    if (hs.empty()) hs = {2.0 * p.grid.spacing[0], 0.05};

    nlohmann::json runs = nlohmann::json::array();
    int idx = 0;
    for (double steep : {c.steepness, c.contrast_steepness}) {
        FieldState init = zero_state(p.grid);
        init.v = interface_profile(p.grid, c.split_at, steep);
        ProbeConfig probes;
        probes.h_list = hs;
        auto rec = simulate(init, p, stepper_of(c), c.horizon, probes);
        std::string tag = idx == 0 ? "a" : "b";
        write_trajectory_csv(c.out_dir + "/trajectory_" + tag + ".csv", rec);
        write_seminorm_csv(c.out_dir + "/seminorms_" + tag + ".csv", rec, hs);
        nlohmann::json r{{"steepness", steep},
                         {"initial_seminorms", rec.samples.front().semi_v},
                         {"final_seminorms", rec.samples.back().semi_v},
                         {"completed", rec.completed}};
        runs.push_back(r);
        ++idx;
    }
    std::ofstream(c.out_dir + "/contrast.json")
        << nlohmann::json{{"h_list", hs}, {"runs", runs}}.dump(2) << '\n';
    finish(c, t0);
    info(st, "contrast report written to " + c.out_dir);
    return 0;
}

int cmd_perturb_lab(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    ForcedOdeProblem p;
    p.n = 1;
    p.field = [](const Vec3& u) { return Vec3{-(u[0] * u[0] * u[0] - u[0]), 0.0, 0.0}; };
    p.equilibria = {{-1.0, 0, 0}, {0.0, 0, 0}, {1.0, 0, 0}};
    p.u0 = {0.1, 0.0, 0.0};
    double eps = c.epsilon;
    if (eps > 0.0) {
        p.forcing = [eps](double t) { return Vec3{eps * std::sin(t), 0.0, 0.0}; };
        p.forcing_deriv = [eps](double t) { return Vec3{eps * std::cos(t), 0.0, 0.0}; };
        p.epsilon = eps;
    }
    std::vector<double> horizons = c.horizons;
    if (horizons.empty()) horizons = {100.0, 200.0, 400.0};
    auto rep = tv_check(p, horizons, c.dt);
    write_perturb_json(c.out_dir + "/perturb.json", rep);
    finish(c, t0);
    info(st, std::string("fit ") + (rep.pass ? "passes" : "fails") + ", C1=" + fmt17(rep.C1) +
                 ", C2=" + fmt17(rep.C2));
    return rep.pass || rep.regime_exit ? 0 : 3;
}

int cmd_forest(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    ForestParams fp;
    fp.alpha = 1.0;
    fp.beta = 1.0;
    fp.delta = 1.0;
    fp.d = 1.0;
    fp.f = 1.0;
    fp.h = 1.0;
    fp.gamma = [](double) { return 1.0; };
    fp.gammap = [](double) { return 0.0; };

    Grid g = make_grid_1d(c.lx, c.nx);
    std::mt19937_64 rng(st.seed);
    ForestState init;
    init.v = random_field(g, rng);
    init.w = random_field(g, rng);
    init.u = random_field(g, rng);
    for (double& u : init.u) u += 1.0;  // keep the young generation positive

    StepperConfig cfg = stepper_of(c);
    auto direct = simulate_forest(init, fp, g, cfg, c.horizon, cfg.snapshot_stride);

    auto red = forest_reduce(fp);
    SystemParams p = make_params(red.coupling, red.nl, g, red.heat);
    ProbeConfig probes;
    auto rec = simulate(forest_to_canonical(init, fp), p, cfg, c.horizon, probes);

    // re-run the canonical step chain to compare v at the sample instants
    FieldState cur = forest_to_canonical(init, fp);
    double disc = 0.0;
    size_t si = 1;
    long steps = (long)std::llround(c.horizon / cfg.dt);
    for (long it = 0; it < steps && si < direct.times.size(); ++it) {
        cur = step(cur, p, cfg);
        if ((it + 1) % cfg.snapshot_stride == 0 || it == steps - 1) {
            for (int k = 0; k < g.node_count(); ++k)
                disc = std::max(disc, std::abs(cur.v[k] - direct.v_series[si][k]));
            ++si;
        }
    }
    write_trajectory_csv(c.out_dir + "/canonical_trajectory.csv", rec);
    nlohmann::json j{{"sup_discrepancy_v", disc}, {"samples", direct.times.size()}};
    std::ofstream(c.out_dir + "/forest.json") << j.dump(2) << '\n';
    finish(c, t0);
    info(st, "sup trajectory discrepancy in v: " + fmt17(disc));
    return 0;
}

int cmd_convergence(const CliState& st) {
    auto t0 = std::chrono::steady_clock::now();
    RunConfig c = load(st);
    std::vector<int> levels = {17, 33, 65, 129};
    auto sp = spatial_convergence(levels);
    std::vector<double> dts = {4e-2, 2e-2, 1e-2};
    auto tm = temporal_convergence(dts);
    nlohmann::json j{{"spatial",
                      {{"spacings", sp.scales}, {"errors", sp.errors}, {"order", sp.order}}},
                     {"temporal",
                      {{"dts", tm.scales}, {"errors", tm.errors}, {"order", tm.order}}}};
    std::ofstream(c.out_dir + "/convergence.json") << j.dump(2) << '\n';
    finish(c, t0);
    info(st, "spatial order " + fmt17(sp.order) + ", temporal order " + fmt17(tm.order));
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"ecotone: coupled oscillator-heat field simulator and equilibrium lab"};
    app.require_subcommand(1);

    CliState st;
    app.add_option("--config", st.config_path, "run configuration file");
    app.add_option("--out", st.out_override, "output directory (overrides config)");
    app.add_option("--seed", st.seed, "seed for randomized initial data");
    app.add_flag("--quiet", st.quiet, "suppress progress output");

    int (*handler)(const CliState&) = nullptr;
    for (auto [name, fn] : std::initializer_list<std::pair<const char*, int (*)(const CliState&)>>{
             {"simulate", cmd_simulate},
             {"equilibrium", cmd_equilibrium},
             {"partition-eq", cmd_partition_eq},
             {"near-homog-eq", cmd_near_homog_eq},
             {"stabilize", cmd_stabilize},
             {"lipschitz-contrast", cmd_lipschitz_contrast},
             {"perturb-lab", cmd_perturb_lab},
             {"forest", cmd_forest},
             {"convergence", cmd_convergence}}) {
        auto* sub = app.add_subcommand(name);
        sub->fallthrough();
        auto fn_copy = fn;
        sub->callback([&handler, fn_copy]() { handler = fn_copy; });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        return handler(st);
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::domain_error& e) {
        std::cerr << "validation error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 3;
    }
}
