#pragma once

#include <string>
#include <vector>

#include "ecotone/system.hpp"

namespace ecotone {

struct DiagnosticSample {
    double t = 0.0;
    double lyap = 0.0;
    double l1_v = 0, l2_v = 0, linf_v = 0;
    double l1_vt = 0, l2_vt = 0, linf_vt = 0;
    double l2_w = 0, h1_w = 0, linf_w = 0;
    double l1_wt = 0, linf_wt = 0;
    double l1_vtt = 0;
    double diss_l2 = 0;           // running int (||vt||_2^2 + ||wt||_2^2)
    double diss_l1 = 0;           // running int (||vtt||_1 + ||vt||_1 + ||wt||_1)
    double energy_integrand = 0;  // 2(phi(v)vt,vt) + 2 alpha ||wt||_2^2
    std::vector<double> semi_v, semi_vt;  // one entry per requested h
};

struct ProbeConfig {
    std::vector<double> h_list;   // Lipschitz seminorm scales; empty disables
    std::vector<int> nodes;       // per-node time series at these nodes
    int snapshot_every = 0;       // store full FieldState every k-th sample; 0 disables
};

struct TrajectoryRecord {
    std::vector<DiagnosticSample> samples;
    std::vector<int> probe_nodes;
    // per probe node: sampled |vt|, |vtt|, |wt| building blocks for the
    // pointwise settling estimates, plus running integrals of their absolute values
    std::vector<std::vector<double>> node_vt, node_vtt, node_wt;
    std::vector<std::vector<double>> node_int_vt, node_int_vtt, node_int_wt;
    std::vector<FieldState> snapshots;
    FieldState final_state;
    bool completed = false;
    std::string error;

    const DiagnosticSample& at_time(double t) const;
};

}  // namespace ecotone
