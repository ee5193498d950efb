#include "srsim/scenario.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <type_traits>

#include "srsim/analytic.hpp"
#include "srsim/grouping.hpp"
#include "srsim/rng.hpp"
#include "srsim/sim.hpp"

namespace srsim {

namespace {

using nlohmann::json;

json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open scenario file: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ConfigError("scenario " + path.string() + ": " + e.what());
  }
  return j;
}

std::uint64_t get_u64(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
    throw ConfigError(context + ": key '" + key + "' must be a nonnegative integer");
  }
  return v.get<std::uint64_t>();
}

std::string get_string(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_string()) throw ConfigError(context + ": key '" + key + "' must be a string");
  return v.get<std::string>();
}

template <typename T>
std::vector<T> get_grid(const json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.empty()) {
    throw ConfigError(context + ": key '" + key + "' must be a nonempty array");
  }
  std::vector<T> grid;
  grid.reserve(v.size());
  for (const auto& item : v) {
    if (!item.is_number()) throw ConfigError(context + ": '" + key + "' entries must be numbers");
    if constexpr (std::is_unsigned_v<T>) {
      if (!item.is_number_unsigned() && !(item.is_number_integer() && item.get<std::int64_t>() >= 0)) {
        throw ConfigError(context + ": '" + key + "' entries must be nonnegative integers");
      }
    }
    grid.push_back(item.get<T>());
  }
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (!(grid[i] > grid[i - 1])) {
      throw ConfigError(context + ": '" + key + "' must be strictly increasing");
    }
  }
  if (grid.front() < T{0}) throw ConfigError(context + ": '" + key + "' must be nonnegative");
  return grid;
}

// Shortest-round-trip decimal with at most 6 significant digits; integral
// doubles that fit print without an exponent. Locale-independent.
std::string format_probability(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string format_lambda(double v) { return format_probability(v); }

class CsvWriter {
 public:
  explicit CsvWriter(const std::filesystem::path& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw IoError("cannot open output file for writing: " + path.string());
  }

  void line(const std::string& text) {
    out_ << text << '\n';
    if (!out_) throw IoError("write failed: " + path_.string());
  }

  void close() {
    out_.flush();
    out_.close();
    if (out_.fail()) throw IoError("write failed: " + path_.string());
  }

 private:
  std::filesystem::path path_;
  std::ofstream out_;
};

}  // namespace

std::string to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::SpsSweep:
      return "sps_sweep";
    case ScenarioKind::CollisionSweep:
      return "collision_sweep";
    case ScenarioKind::Grouping:
      return "grouping";
  }
  return "unknown";
}

Scenario load_scenario(const std::filesystem::path& path) {
  const json j = read_json_file(path);
  const std::string context = "scenario " + path.filename().string();
  if (!j.is_object()) throw ConfigError(context + ": top level must be an object");

  Scenario s;
  s.name = get_string(j, "name", context);
  const std::string kind = get_string(j, "kind", context);

  if (kind == "collision_sweep") {
    s.kind = ScenarioKind::CollisionSweep;
    require_only_keys(j,
                      {"name", "kind", "group", "sensing", "external", "lambda_grid", "trials",
                       "seed", "output_path"},
                      context);
    if (!j.contains("group")) throw ConfigError(context + ": missing key 'group'");
    s.group = j.at("group").get<GroupConfig>();
    if (j.contains("sensing")) {
      s.sensing = j.at("sensing").get<SensingConfig>();
      if (s.sensing->l_sensing_slots != s.group->l_sensing_slots) {
        throw ConfigError(context + ": sensing.l_sensing_slots must equal group.l_sensing_slots");
      }
    }
    if (j.contains("external")) s.external = j.at("external").get<ExternalOccupancy>();
    s.lambda_grid = get_grid<double>(j, "lambda_grid", context);
    for (const double lam : s.lambda_grid) {
      if (!std::isfinite(lam)) throw ConfigError(context + ": lambda_grid entries must be finite");
    }
    if (j.contains("trials")) s.trials = get_u64(j, "trials", context);
    if (s.trials == 0) throw ConfigError(context + ": trials must be >= 1");
    s.seed = get_u64(j, "seed", context);
  } else if (kind == "sps_sweep") {
    s.kind = ScenarioKind::SpsSweep;
    require_only_keys(j, {"name", "kind", "sps", "n_users_grid", "output_path"}, context);
    if (!j.contains("sps")) throw ConfigError(context + ": missing key 'sps'");
    s.sps = j.at("sps").get<SpsParams>();
    s.n_users_grid = get_grid<std::uint64_t>(j, "n_users_grid", context);
  } else if (kind == "grouping") {
    s.kind = ScenarioKind::Grouping;
    require_only_keys(j, {"name", "kind", "positions_path", "hearing_range", "total_srs", "output_path"},
                      context);
    const std::filesystem::path positions = get_string(j, "positions_path", context);
    s.positions_path =
        positions.is_absolute() ? positions : path.parent_path() / positions;
    if (!j.contains("hearing_range") || !j.at("hearing_range").is_number()) {
      throw ConfigError(context + ": missing numeric key 'hearing_range'");
    }
    s.hearing_range = j.at("hearing_range").get<double>();
    if (!(s.hearing_range > 0.0) || !std::isfinite(s.hearing_range)) {
      throw ConfigError(context + ": hearing_range must be > 0");
    }
    const std::uint64_t total = get_u64(j, "total_srs", context);
    if (total == 0 || total > 0xffffffffULL) {
      throw ConfigError(context + ": total_srs must be in [1, 2^32)");
    }
    s.total_srs = static_cast<std::uint32_t>(total);
  } else {
    throw ConfigError(context + ": unknown kind '" + kind +
                      "' (expected sps_sweep, collision_sweep or grouping)");
  }

  s.output_path = get_string(j, "output_path", context);
  if (s.output_path.empty()) throw ConfigError(context + ": output_path must be nonempty");
  return s;
}

void run_sps_sweep(const Scenario& scenario, const std::filesystem::path& out_path) {
  if (scenario.kind != ScenarioKind::SpsSweep || !scenario.sps) {
    throw ConfigError("run_sps_sweep: scenario kind must be sps_sweep");
  }
  const SpsParams& params = *scenario.sps;

  CsvWriter csv(out_path);
  csv.line("n_users,required_rate_bps");
  for (const std::uint64_t n : scenario.n_users_grid) {
    std::ostringstream row;
    row << n << ',';
    try {
      sps_required_rate(n, params);
      // Integer bps, rounded half away from zero; exact operating points
      // (the ones worth pinning) divide evenly and print verbatim.
      using U128 = unsigned __int128;
      const U128 num = static_cast<U128>(n) * params.packet_bits * 1'000'000'000u;
      const U128 den = static_cast<U128>(params.t_available.ns) -
                       static_cast<U128>(n) * static_cast<U128>(params.t_lbt.ns);
      const std::uint64_t bps = static_cast<std::uint64_t>((2 * num + den) / (2 * den));
      row << bps;
    } catch (const NonPositiveTransmitTime&) {
      row << "INFEASIBLE";
    }
    csv.line(row.str());
  }
  csv.close();
}

void run_collision_sweep(const Scenario& scenario, const std::filesystem::path& out_path,
                         unsigned workers) {
  if (scenario.kind != ScenarioKind::CollisionSweep || !scenario.group) {
    throw ConfigError("run_collision_sweep: scenario kind must be collision_sweep");
  }
  const GroupConfig& group = *scenario.group;

  CsvWriter csv(out_path);
  csv.line(
      "lambda,analytic_srs,analytic_contention,mc_srs,mc_srs_stderr,"
      "mc_contention,mc_contention_stderr,seed");

  for (std::size_t row_index = 0; row_index < scenario.lambda_grid.size(); ++row_index) {
    const double lambda = scenario.lambda_grid[row_index];
    const TrafficModel traffic(lambda, group.n_group_size);

    const double analytic_srs = overall_collision(traffic, group, Scheme::Srs);
    const double analytic_contention = overall_collision(traffic, group, Scheme::Contention);

    // Both schemes share the row seed: trial t then draws the same active-user
    // count under either scheme, which only tightens the SRS/contention
    // comparison.
    const std::uint64_t row_seed = SubstreamRng::derive_seed(scenario.seed, row_index);
    const SimConfig srs_config(group, Scheme::Srs, scenario.external, traffic, scenario.trials,
                               row_seed);
    const SimConfig contention_config(group, Scheme::Contention, scenario.external, traffic,
                                      scenario.trials, row_seed);
    const McEstimate mc_srs = monte_carlo_poc(srs_config, workers);
    const McEstimate mc_contention = monte_carlo_poc(contention_config, workers);

    std::ostringstream row;
    row << format_lambda(lambda) << ',' << format_probability(analytic_srs) << ','
        << format_probability(analytic_contention) << ',' << format_probability(mc_srs.p_hat)
        << ',' << format_probability(mc_srs.std_error) << ','
        << format_probability(mc_contention.p_hat) << ','
        << format_probability(mc_contention.std_error) << ',' << row_seed;
    csv.line(row.str());
  }
  csv.close();
}

void run_grouping(const Scenario& scenario, const std::filesystem::path& out_path) {
  if (scenario.kind != ScenarioKind::Grouping) {
    throw ConfigError("run_grouping: scenario kind must be grouping");
  }

  const std::vector<UePosition> positions = load_positions_csv(scenario.positions_path);
  const GroupAssignment assignment = group_users(positions, scenario.hearing_range);
  const std::vector<SrRange> ranges = assign_group_resources(assignment, scenario.total_srs);

  CsvWriter csv(out_path);
  csv.line("group_id,ue_id");
  for (std::size_t g = 0; g < assignment.groups.size(); ++g) {
    for (const std::uint32_t ue : assignment.groups[g]) {
      csv.line(std::to_string(g) + ',' + std::to_string(ue));
    }
  }
  csv.line("group_id,size,sr_lo,sr_hi");
  for (std::size_t g = 0; g < assignment.groups.size(); ++g) {
    std::ostringstream row;
    row << g << ',' << assignment.groups[g].size() << ',' << ranges[g].lo << ',' << ranges[g].hi;
    csv.line(row.str());
  }
  csv.close();
}

std::string describe_scenario(const Scenario& scenario) {
  std::ostringstream out;
  out << "name: " << scenario.name << "\nkind: " << to_string(scenario.kind) << '\n';
  switch (scenario.kind) {
    case ScenarioKind::CollisionSweep: {
      const GroupConfig& g = *scenario.group;
      out << "group: K=" << g.k_subresources << " L=" << g.l_sensing_slots
          << " N_g=" << g.n_group_size << " N_u=" << g.n_groups << '\n';
      if (scenario.sensing) {
        out << "worst-case sensing: " << scenario.sensing->worst_case_duration().us() << " us\n";
      }
      out << "external busy probability: " << scenario.external.busy_probability << '\n'
          << "lambda grid: [" << format_lambda(scenario.lambda_grid.front()) << ", "
          << format_lambda(scenario.lambda_grid.back()) << "], " << scenario.lambda_grid.size()
          << " points\n"
          << "trials per point: " << scenario.trials << ", seed: " << scenario.seed << '\n';
      break;
    }
    case ScenarioKind::SpsSweep: {
      const SpsParams& p = *scenario.sps;
      out << "packet: " << p.packet_bits << " bits\n"
          << "T_u=" << p.t_uplink_deadline.us() << " us, T_au=" << p.t_available.us()
          << " us, T_lbt=" << p.t_lbt.us() << " us\n"
          << "n_users grid: [" << scenario.n_users_grid.front() << ", "
          << scenario.n_users_grid.back() << "], " << scenario.n_users_grid.size() << " points\n";
      break;
    }
    case ScenarioKind::Grouping:
      out << "positions: " << scenario.positions_path.string() << '\n'
          << "hearing range: " << scenario.hearing_range << " m, total sub-resources: "
          << scenario.total_srs << '\n';
      break;
  }
  out << "output: " << scenario.output_path << '\n';
  return out.str();
}

}  // namespace srsim
