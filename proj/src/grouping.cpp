#include "srsim/grouping.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <string>

namespace srsim {

namespace {

bool within_range(const UePosition& a, const UePosition& b, double range) {
  const double dx = a.x - b.x;
  const double dy = a.y - b.y;
  return dx * dx + dy * dy <= range * range;
}

}  // namespace

GroupAssignment group_users(std::span<const UePosition> positions, double hearing_range) {
  if (positions.empty()) throw ConfigError("group_users: positions must be nonempty");
  if (!(hearing_range > 0.0) || !std::isfinite(hearing_range)) {
    throw ConfigError("group_users: hearing_range must be > 0");
  }

  std::vector<UePosition> sorted(positions.begin(), positions.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const UePosition& a, const UePosition& b) { return a.ue_id < b.ue_id; });
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].ue_id == sorted[i - 1].ue_id) {
      throw ConfigError("group_users: duplicate ue_id " + std::to_string(sorted[i].ue_id));
    }
  }

  GroupAssignment assignment;
  assignment.hearing_range = hearing_range;

  std::vector<bool> grouped(sorted.size(), false);
  for (std::size_t anchor = 0; anchor < sorted.size(); ++anchor) {
    if (grouped[anchor]) continue;
    std::vector<std::size_t> members{anchor};
    grouped[anchor] = true;
    for (std::size_t cand = anchor + 1; cand < sorted.size(); ++cand) {
      if (grouped[cand]) continue;
      const bool audible = std::all_of(members.begin(), members.end(), [&](std::size_t m) {
        return within_range(sorted[cand], sorted[m], hearing_range);
      });
      if (audible) {
        members.push_back(cand);
        grouped[cand] = true;
      }
    }
    std::vector<std::uint32_t> ids;
    ids.reserve(members.size());
    for (const std::size_t m : members) ids.push_back(sorted[m].ue_id);
    assignment.groups.push_back(std::move(ids));
  }
  return assignment;
}

std::vector<SrRange> assign_group_resources(const GroupAssignment& assignment,
                                            std::uint32_t total_srs) {
  const std::size_t n_groups = assignment.groups.size();
  if (n_groups == 0) throw ConfigError("assign_group_resources: no groups");
  if (total_srs < n_groups) {
    throw ConfigError("assign_group_resources: " + std::to_string(total_srs) +
                      " sub-resources cannot cover " + std::to_string(n_groups) + " groups");
  }

  std::uint64_t total_members = 0;
  for (const auto& g : assignment.groups) total_members += g.size();

  // Largest-remainder apportionment of total_srs over group sizes.
  std::vector<std::uint32_t> alloc(n_groups, 0);
  std::vector<std::pair<double, std::size_t>> remainders;  // (-remainder, index) for sorting
  std::uint64_t assigned = 0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    const double quota = static_cast<double>(total_srs) * assignment.groups[g].size() /
                         static_cast<double>(total_members);
    alloc[g] = static_cast<std::uint32_t>(quota);
    assigned += alloc[g];
    remainders.emplace_back(-(quota - alloc[g]), g);
  }
  std::sort(remainders.begin(), remainders.end());
  for (std::size_t i = 0; assigned < total_srs; ++i) {
    ++alloc[remainders[i % n_groups].second];
    ++assigned;
  }

  // Every group needs at least one sub-resource; take from the largest holder.
  for (std::size_t g = 0; g < n_groups; ++g) {
    while (alloc[g] == 0) {
      std::size_t donor = 0;
      for (std::size_t d = 1; d < n_groups; ++d) {
        if (alloc[d] > alloc[donor]) donor = d;
      }
      --alloc[donor];
      ++alloc[g];
    }
  }

  std::vector<SrRange> ranges(n_groups);
  std::uint32_t cursor = 0;
  for (std::size_t g = 0; g < n_groups; ++g) {
    ranges[g] = SrRange{cursor, cursor + alloc[g]};
    cursor += alloc[g];
  }
  return ranges;
}

std::vector<UePosition> load_positions_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open positions file: " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw ConfigError("positions file is empty: " + path.string());
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "ue_id,x,y") {
    throw ConfigError("positions file must start with header 'ue_id,x,y', got '" + line + "'");
  }

  std::vector<UePosition> positions;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;

    std::istringstream row(line);
    std::string id_field, x_field, y_field, extra;
    if (!std::getline(row, id_field, ',') || !std::getline(row, x_field, ',') ||
        !std::getline(row, y_field, ',')) {
      throw ConfigError("positions line " + std::to_string(line_no) + ": expected 'ue_id,x,y'");
    }
    if (std::getline(row, extra, ',')) {
      throw ConfigError("positions line " + std::to_string(line_no) + ": too many fields");
    }
    try {
      std::size_t used = 0;
      if (id_field.empty() || id_field[0] == '-' || id_field[0] == '+') {
        throw std::invalid_argument(id_field);
      }
      const unsigned long id = std::stoul(id_field, &used);
      if (used != id_field.size() || id > 0xffffffffUL) throw std::invalid_argument(id_field);
      const double x = std::stod(x_field, &used);
      if (used != x_field.size()) throw std::invalid_argument(x_field);
      const double y = std::stod(y_field, &used);
      if (used != y_field.size()) throw std::invalid_argument(y_field);
      positions.emplace_back(static_cast<std::uint32_t>(id), x, y);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("positions line " + std::to_string(line_no) + ": malformed value in '" +
                        line + "'");
    }
  }
  if (positions.empty()) throw ConfigError("positions file has no data rows: " + path.string());
  return positions;
}

}  // namespace srsim
