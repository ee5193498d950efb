// Scenario runner: evaluates subband-random-sensing and contention grant-free
// uplink scenarios (closed form + Monte Carlo), SPS capacity sweeps, and
// geolocation-based user grouping, writing CSV data files.
//
// Exit codes: 0 success, 2 invalid configuration, 3 I/O failure.

#include <cstdint>
#include <exception>
#include <filesystem>
#include <functional>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "srsim/scenario.hpp"
#include "srsim/types.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitIo = 3;

struct Options {
  std::string scenario_path;
  std::optional<std::uint64_t> seed_override;
  std::optional<std::uint64_t> trials_override;
  std::optional<std::string> out_override;
  unsigned workers = 1;
};

srsim::Scenario load_with_overrides(const Options& opt, srsim::ScenarioKind expected_kind) {
  srsim::Scenario scenario = srsim::load_scenario(opt.scenario_path);
  if (scenario.kind != expected_kind) {
    throw srsim::ConfigError("scenario kind is " + srsim::to_string(scenario.kind) +
                             ", expected " + srsim::to_string(expected_kind));
  }
  if (opt.seed_override) scenario.seed = *opt.seed_override;
  if (opt.trials_override) {
    if (*opt.trials_override == 0) throw srsim::ConfigError("--trials must be >= 1");
    scenario.trials = *opt.trials_override;
  }
  if (opt.out_override) scenario.output_path = *opt.out_override;
  return scenario;
}

int run_guarded(const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const srsim::IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const srsim::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitConfig;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Grant-free uplink collision analysis: subband random sensing vs contention"};
  app.require_subcommand(1);

  Options opt;

  auto* sps = app.add_subcommand("sps-sweep", "Required SPS uplink rate per user count, as CSV");
  sps->add_option("scenario", opt.scenario_path, "sps_sweep scenario JSON")->required();
  sps->add_option("--out", opt.out_override, "override output_path");

  auto* collision =
      app.add_subcommand("collision-sweep", "Collision probability vs mean active users, as CSV");
  collision->add_option("scenario", opt.scenario_path, "collision_sweep scenario JSON")->required();
  collision->add_option("--seed", opt.seed_override, "override scenario seed");
  collision->add_option("--trials", opt.trials_override, "override Monte Carlo trials per point");
  collision->add_option("--workers", opt.workers, "worker threads (does not change results)")
      ->check(CLI::Range(1u, 256u));
  collision->add_option("--out", opt.out_override, "override output_path");

  auto* grouping = app.add_subcommand("grouping", "Group users by geolocation, as CSV");
  grouping->add_option("scenario", opt.scenario_path, "grouping scenario JSON")->required();
  grouping->add_option("--out", opt.out_override, "override output_path");

  auto* validate = app.add_subcommand("validate", "Load a scenario and print its summary");
  validate->add_option("scenario", opt.scenario_path, "scenario JSON")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  if (sps->parsed()) {
    return run_guarded([&] {
      const srsim::Scenario s = load_with_overrides(opt, srsim::ScenarioKind::SpsSweep);
      srsim::run_sps_sweep(s, s.output_path);
      std::cout << "wrote " << s.output_path << '\n';
    });
  }
  if (collision->parsed()) {
    return run_guarded([&] {
      const srsim::Scenario s = load_with_overrides(opt, srsim::ScenarioKind::CollisionSweep);
      srsim::run_collision_sweep(s, s.output_path, opt.workers);
      std::cout << "wrote " << s.output_path << '\n';
    });
  }
  if (grouping->parsed()) {
    return run_guarded([&] {
      const srsim::Scenario s = load_with_overrides(opt, srsim::ScenarioKind::Grouping);
      srsim::run_grouping(s, s.output_path);
      std::cout << "wrote " << s.output_path << '\n';
    });
  }
  // validate
  return run_guarded([&] {
    const srsim::Scenario s = srsim::load_scenario(opt.scenario_path);
    std::cout << srsim::describe_scenario(s);
  });
}
