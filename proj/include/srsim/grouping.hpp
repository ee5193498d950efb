#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "srsim/types.hpp"

namespace srsim {

/// Partition of users into groups whose members are pairwise within
/// hearing_range of each other.
struct GroupAssignment {
  std::vector<std::vector<std::uint32_t>> groups;  // ue_ids, ascending within a group
  double hearing_range = 0.0;
};

/// Half-open sub-resource index range [lo, hi) assigned to one group.
struct SrRange {
  std::uint32_t lo = 0;
  std::uint32_t hi = 0;

  std::uint32_t size() const { return hi - lo; }
  friend bool operator==(const SrRange&, const SrRange&) = default;
};

/// Greedy partition by geolocation: users are visited in ascending ue_id; the
/// first ungrouped user anchors a new group, and every later ungrouped user
/// joins iff it is within hearing_range (Euclidean) of every current member.
/// Deterministic for identical input. Throws ConfigError on empty input,
/// duplicate ue_ids or nonpositive range.
GroupAssignment group_users(std::span<const UePosition> positions, double hearing_range);

/// Splits [0, total_srs) into contiguous per-group ranges sized proportionally
/// to group membership (largest-remainder rounding, at least one sub-resource
/// per group). Throws ConfigError when total_srs < number of groups.
std::vector<SrRange> assign_group_resources(const GroupAssignment& assignment,
                                            std::uint32_t total_srs);

/// Reads positions from a CSV file with header `ue_id,x,y`.
/// Throws IoError when the file cannot be read, ConfigError on malformed rows.
std::vector<UePosition> load_positions_csv(const std::filesystem::path& path);

}  // namespace srsim
