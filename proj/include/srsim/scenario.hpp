#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "srsim/types.hpp"

namespace srsim {

enum class ScenarioKind { SpsSweep, CollisionSweep, Grouping };

std::string to_string(ScenarioKind kind);

/// One experiment description loaded from a JSON file. Which fields are
/// populated depends on the kind; load_scenario enforces the per-kind schema
/// and rejects unknown keys.
struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::CollisionSweep;
  std::string output_path;

  // collision_sweep
  std::optional<GroupConfig> group;
  std::optional<SensingConfig> sensing;
  ExternalOccupancy external;
  std::vector<double> lambda_grid;
  std::uint64_t trials = 1'000'000;
  std::uint64_t seed = 0;

  // sps_sweep
  std::optional<SpsParams> sps;
  std::vector<std::uint64_t> n_users_grid;

  // grouping (positions_path is resolved relative to the scenario file)
  std::filesystem::path positions_path;
  double hearing_range = 0.0;
  std::uint32_t total_srs = 0;
};

/// Loads and validates a scenario file. Throws IoError when the file cannot
/// be read and ConfigError on schema or invariant violations.
Scenario load_scenario(const std::filesystem::path& path);

/// Writes rows `n_users,required_rate_bps` for each grid point; grid points
/// whose LBT overhead leaves no transmit time carry the literal INFEASIBLE.
void run_sps_sweep(const Scenario& scenario, const std::filesystem::path& out_path);

/// Writes one row per lambda:
/// `lambda,analytic_srs,analytic_contention,mc_srs,mc_srs_stderr,
///  mc_contention,mc_contention_stderr,seed`.
/// Each row gets a seed derived from the scenario seed and the row index and
/// runs both schemes at the scenario's trial count. Output bytes are identical
/// for any worker count.
void run_collision_sweep(const Scenario& scenario, const std::filesystem::path& out_path,
                         unsigned workers = 1);

/// Writes group membership rows `group_id,ue_id` followed by per-group
/// summary rows `group_id,size,sr_lo,sr_hi`.
void run_grouping(const Scenario& scenario, const std::filesystem::path& out_path);

/// One-paragraph human-readable description (used by the validate verb).
std::string describe_scenario(const Scenario& scenario);

}  // namespace srsim
