#include "ecotone/io.hpp"

#include <cstdio>
#include <fstream>
#include <functional>
#include <stdexcept>

#include <json.hpp>

namespace ecotone {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out)
        throw std::runtime_error("cannot open output file: " + path);
    return out;
}

}  // namespace

std::string fmt17(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec) {
    auto out = open_out(path);
    out << "t,lyapunov,l2_v,l2_vt,l2_w,linf_v,linf_vt,linf_w,l1_vt,l1_wt,diss_l2,diss_l1\n";
    for (const auto& s : rec.samples) {
        out << fmt17(s.t) << ',' << fmt17(s.lyap) << ',' << fmt17(s.l2_v) << ','
            << fmt17(s.l2_vt) << ',' << fmt17(s.l2_w) << ',' << fmt17(s.linf_v) << ','
            << fmt17(s.linf_vt) << ',' << fmt17(s.linf_w) << ',' << fmt17(s.l1_vt) << ','
            << fmt17(s.l1_wt) << ',' << fmt17(s.diss_l2) << ',' << fmt17(s.diss_l1) << '\n';
    }
}

void write_snapshot_csv(const std::string& path, const Grid& g, const FieldState& s) {
    auto out = open_out(path);
    out << (g.dim == 2 ? "x,y,v,vt,w\n" : "x,v,vt,w\n");
    for (int k = 0; k < g.node_count(); ++k) {
        auto p = g.position(k);
        out << fmt17(p[0]) << ',';
        if (g.dim == 2) out << fmt17(p[1]) << ',';
        out << fmt17(s.v[k]) << ',' << fmt17(s.vt[k]) << ',' << fmt17(s.w[k]) << '\n';
    }
}

void write_seminorm_csv(const std::string& path, const TrajectoryRecord& rec,
                        const std::vector<double>& h_list) {
    auto out = open_out(path);
    out << "t,h,seminorm_v,seminorm_vt\n";
    for (const auto& s : rec.samples) {
        if (s.semi_v.size() != h_list.size())
            throw std::invalid_argument("write_seminorm_csv: sample lacks the seminorm series");
        for (size_t i = 0; i < h_list.size(); ++i)
            out << fmt17(s.t) << ',' << fmt17(h_list[i]) << ',' << fmt17(s.semi_v[i]) << ','
                << fmt17(s.semi_vt[i]) << '\n';
    }
}

void write_equilibrium_csv(const std::string& path, const Grid& g,
                           const EquilibriumSolution& eq) {
    auto out = open_out(path);
    out << (g.dim == 2 ? "x,y,v0,w0\n" : "x,v0,w0\n");
    for (int k = 0; k < g.node_count(); ++k) {
        auto p = g.position(k);
        out << fmt17(p[0]) << ',';
        if (g.dim == 2) out << fmt17(p[1]) << ',';
        out << fmt17(eq.v0[k]) << ',' << fmt17(eq.w0[k]) << '\n';
    }
}

void write_equilibrium_json(const std::string& path, const EquilibriumSolution& eq,
                            double alpha) {
    nlohmann::json j{{"residual", eq.residual},
                     {"correction_norm", eq.correction_norm},
                     {"margin", eq.margin},
                     {"source", eq.source},
                     {"alpha", alpha}};
    open_out(path) << j.dump(2) << '\n';
}

void write_perturb_json(const std::string& path, const TvReport& rep) {
    nlohmann::json j{{"horizons", rep.horizons}, {"int_du", rep.int_du},
                     {"int_dh", rep.int_dh},     {"C1", rep.C1},
                     {"C2", rep.C2},             {"out_time", rep.out_times},
                     {"pass", rep.pass}};
    open_out(path) << j.dump(2) << '\n';
}

void write_manifest(const std::string& dir, const std::string& config_text,
                    double wall_seconds) {
    nlohmann::json j{{"config_hash", std::hash<std::string>{}(config_text)},
                     {"tool", "ecotone"},
                     {"version", "1.0.0"},
                     {"wall_seconds", wall_seconds}};
    open_out(dir + "/manifest.json") << j.dump(2) << '\n';
}

}  // namespace ecotone
