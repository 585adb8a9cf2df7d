#pragma once

#include <string>

#include "ecotone/equilibria.hpp"
#include "ecotone/perturbation.hpp"
#include "ecotone/trajectory.hpp"

namespace ecotone {

/// 17 significant digits, enough to round-trip an IEEE double.
std::string fmt17(double x);

void write_trajectory_csv(const std::string& path, const TrajectoryRecord& rec);

void write_snapshot_csv(const std::string& path, const Grid& g, const FieldState& s);

/// Companion seminorm series: one row per (sample, h) pair.
void write_seminorm_csv(const std::string& path, const TrajectoryRecord& rec,
                        const std::vector<double>& h_list);

void write_equilibrium_csv(const std::string& path, const Grid& g, const EquilibriumSolution& eq);

void write_equilibrium_json(const std::string& path, const EquilibriumSolution& eq, double alpha);

void write_perturb_json(const std::string& path, const TvReport& rep);

/// manifest.json in the output directory: config hash, tool version, wall time.
void write_manifest(const std::string& dir, const std::string& config_text,
                    double wall_seconds);

}  // namespace ecotone
