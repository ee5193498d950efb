#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>

#include "srsim/grouping.hpp"
#include "srsim/rng.hpp"

using namespace srsim;

namespace {

std::vector<UePosition> cluster_instance() {
  // Three clusters with diameters well under 100 and gaps well over 100,
  // sizes 6 / 3 / 2, ue_ids interleaved across clusters.
  return {
      {1, 0.0, 0.0},    {3, 10.0, 5.0},  {5, -8.0, 12.0},  {7, 15.0, -7.0},
      {8, -12.0, -9.0}, {10, 6.0, 18.0},                                      // cluster A
      {2, 500.0, 0.0},  {6, 510.0, 8.0}, {11, 495.0, -12.0},                  // cluster B
      {4, 0.0, 500.0},  {9, 14.0, 508.0},                                     // cluster C
  };
}

double distance(const UePosition& a, const UePosition& b) {
  return std::hypot(a.x - b.x, a.y - b.y);
}

void check_partition_and_audibility(const std::vector<UePosition>& positions,
                                    const GroupAssignment& assignment, double range) {
  std::set<std::uint32_t> seen;
  std::size_t total = 0;
  for (const auto& group : assignment.groups) {
    total += group.size();
    for (const std::uint32_t id : group) seen.insert(id);
  }
  CHECK(total == positions.size());
  CHECK(seen.size() == positions.size());  // pairwise disjoint + exhaustive

  std::map<std::uint32_t, UePosition> by_id;
  for (const auto& p : positions) by_id[p.ue_id] = p;
  for (const auto& group : assignment.groups) {
    for (std::size_t i = 0; i < group.size(); ++i) {
      for (std::size_t j = i + 1; j < group.size(); ++j) {
        CHECK(distance(by_id[group[i]], by_id[group[j]]) <= range + 1e-9);
      }
    }
  }
}

}  // namespace

TEST_CASE("all users in range form a single group") {
  std::vector<UePosition> positions;
  for (std::uint32_t i = 0; i < 5; ++i) positions.emplace_back(i, i * 1.0, 0.0);
  const GroupAssignment a = group_users(positions, 10.0);
  REQUIRE(a.groups.size() == 1);
  CHECK(a.groups[0] == std::vector<std::uint32_t>{0, 1, 2, 3, 4});
}

TEST_CASE("users pairwise out of range form singletons") {
  std::vector<UePosition> positions;
  for (std::uint32_t i = 0; i < 5; ++i) positions.emplace_back(i, i * 100.0, 0.0);
  const GroupAssignment a = group_users(positions, 10.0);
  CHECK(a.groups.size() == 5);
  for (const auto& g : a.groups) CHECK(g.size() == 1);
}

TEST_CASE("three spatial clusters are recovered exactly") {
  const auto positions = cluster_instance();
  const GroupAssignment a = group_users(positions, 100.0);
  REQUIRE(a.groups.size() == 3);
  CHECK(a.groups[0] == std::vector<std::uint32_t>{1, 3, 5, 7, 8, 10});
  CHECK(a.groups[1] == std::vector<std::uint32_t>{2, 6, 11});
  CHECK(a.groups[2] == std::vector<std::uint32_t>{4, 9});
  check_partition_and_audibility(positions, a, 100.0);
}

TEST_CASE("grouping rejects bad input") {
  CHECK_THROWS_AS(group_users(std::vector<UePosition>{}, 10.0), ConfigError);
  const std::vector<UePosition> dup = {{7, 0.0, 0.0}, {7, 1.0, 1.0}};
  CHECK_THROWS_WITH_AS(group_users(dup, 10.0), doctest::Contains("7"), ConfigError);
  const std::vector<UePosition> one = {{1, 0.0, 0.0}};
  CHECK_THROWS_AS(group_users(one, 0.0), ConfigError);
  CHECK_THROWS_AS(group_users(one, -5.0), ConfigError);
}

TEST_CASE("grouping properties hold on random instances") {
  for (std::uint64_t instance = 0; instance < 200; ++instance) {
    SubstreamRng rng(555, instance);
    const std::uint32_t n = 1 + rng.next_below(40);
    const double range = 5.0 + rng.next_double() * 120.0;
    std::vector<UePosition> positions;
    positions.reserve(n);
    for (std::uint32_t i = 0; i < n; ++i) {
      positions.emplace_back(i, rng.next_double() * 400.0, rng.next_double() * 400.0);
    }
    const GroupAssignment a = group_users(positions, range);
    const GroupAssignment b = group_users(positions, range);
    CAPTURE(instance);
    check_partition_and_audibility(positions, a, range);
    CHECK(a.groups == b.groups);  // determinism
  }
}

TEST_CASE("resource assignment splits proportionally") {
  GroupAssignment one;
  one.groups = {{1, 2, 3, 4, 5}};
  CHECK(assign_group_resources(one, 8) == std::vector<SrRange>{{0, 8}});

  GroupAssignment two;
  two.groups = {{1, 2}, {3, 4}};
  CHECK(assign_group_resources(two, 8) == std::vector<SrRange>{{0, 4}, {4, 8}});

  GroupAssignment three;
  three.groups = {{1, 2, 3, 4, 5, 6}, {7, 8, 9}, {10, 11}};
  const auto ranges = assign_group_resources(three, 11);
  REQUIRE(ranges.size() == 3);
  CHECK(ranges[0].size() == 6);
  CHECK(ranges[1].size() == 3);
  CHECK(ranges[2].size() == 2);
}

TEST_CASE("resource assignment guarantees one sub-resource per group") {
  GroupAssignment skewed;
  skewed.groups.assign(1, std::vector<std::uint32_t>(99, 0));
  for (std::uint32_t i = 0; i < 99; ++i) skewed.groups[0][i] = i;
  skewed.groups.push_back({1000});
  const auto ranges = assign_group_resources(skewed, 2);
  REQUIRE(ranges.size() == 2);
  CHECK(ranges[0].size() == 1);
  CHECK(ranges[1].size() == 1);

  CHECK_THROWS_AS(assign_group_resources(skewed, 1), ConfigError);
}

TEST_CASE("resource ranges are disjoint, contiguous and cover total_srs") {
  for (std::uint64_t instance = 0; instance < 100; ++instance) {
    SubstreamRng rng(777, instance);
    GroupAssignment assignment;
    const std::uint32_t n_groups = 1 + rng.next_below(8);
    std::uint32_t next_id = 0;
    for (std::uint32_t g = 0; g < n_groups; ++g) {
      std::vector<std::uint32_t> members(1 + rng.next_below(20));
      for (auto& m : members) m = next_id++;
      assignment.groups.push_back(std::move(members));
    }
    const std::uint32_t total = n_groups + rng.next_below(40);
    const auto ranges = assign_group_resources(assignment, total);
    REQUIRE(ranges.size() == n_groups);
    std::uint32_t cursor = 0;
    for (const auto& r : ranges) {
      CHECK(r.lo == cursor);  // contiguous, hence disjoint
      CHECK(r.hi > r.lo);
      cursor = r.hi;
    }
    CHECK(cursor == total);
  }
}

TEST_CASE("positions csv loader") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(SRSIM_TEST_TMP_DIR);
  fs::create_directories(dir);

  SUBCASE("well-formed file") {
    const fs::path file = dir / "pos_ok.csv";
    std::ofstream(file) << "ue_id,x,y\n1,0.5,-2.25\n2,10,20\n";
    const auto positions = load_positions_csv(file);
    REQUIRE(positions.size() == 2);
    CHECK(positions[0].ue_id == 1);
    CHECK(positions[0].x == 0.5);
    CHECK(positions[0].y == -2.25);
  }

  SUBCASE("missing file") {
    CHECK_THROWS_AS(load_positions_csv(dir / "nope.csv"), IoError);
  }

  SUBCASE("bad header") {
    const fs::path file = dir / "pos_header.csv";
    std::ofstream(file) << "id,x,y\n1,0,0\n";
    CHECK_THROWS_AS(load_positions_csv(file), ConfigError);
  }

  SUBCASE("malformed row") {
    const fs::path file = dir / "pos_bad.csv";
    std::ofstream(file) << "ue_id,x,y\n1,zero,0\n";
    CHECK_THROWS_WITH_AS(load_positions_csv(file), doctest::Contains("line 2"), ConfigError);
  }

  SUBCASE("negative id rejected") {
    const fs::path file = dir / "pos_neg.csv";
    std::ofstream(file) << "ue_id,x,y\n-1,0,0\n";
    CHECK_THROWS_AS(load_positions_csv(file), ConfigError);
  }
}
