#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

namespace srsim {

/// Invalid configuration or malformed input. Carries a human-readable reason.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// File could not be read or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The per-user LBT overhead leaves no transmit time (N * T_lbt >= T_available).
class NonPositiveTransmitTime : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Uplink access scheme under evaluation.
enum class Scheme {
  Srs,         // subband random sensing: sense, then pick a free sub-resource
  Contention,  // pick uniformly among all sub-resources, no sensing
};

std::string to_string(Scheme scheme);
Scheme scheme_from_string(const std::string& text);

/// A time duration stored as integer nanoseconds so that capacity arithmetic
/// stays exact. Configs specify microseconds; anything finer than 1 ns is
/// rejected rather than silently rounded.
struct Duration {
  std::int64_t ns = 0;

  static Duration from_us(double microseconds);
  static Duration from_ns(std::int64_t nanoseconds) { return Duration{nanoseconds}; }
  double us() const { return static_cast<double>(ns) / 1000.0; }

  friend auto operator<=>(const Duration&, const Duration&) = default;
};

/// Resource and sensing geometry of one user group:
/// K sub-resources, L sensing slots, up to N_g users per group, N_u groups.
struct GroupConfig {
  std::uint32_t k_subresources = 0;
  std::uint32_t l_sensing_slots = 0;
  std::uint32_t n_group_size = 0;
  std::uint32_t n_groups = 0;

  GroupConfig(std::uint32_t k_subresources, std::uint32_t l_sensing_slots,
              std::uint32_t n_group_size, std::uint32_t n_groups);
};

/// Sensing timing: slot l senses for t_initial + t_additional * l,
/// l in [0, l_sensing_slots). Timing is reporting-only; collision statistics
/// depend on the slot index alone.
struct SensingConfig {
  Duration t_initial;
  Duration t_additional;
  std::uint32_t l_sensing_slots = 0;

  SensingConfig(Duration t_initial, Duration t_additional, std::uint32_t l_sensing_slots);

  Duration slot_duration(std::uint32_t slot) const;
  Duration worst_case_duration() const { return slot_duration(l_sensing_slots - 1); }
};

/// Number of active users per slot: Poisson with mean lambda, truncated to
/// [0, truncation] and renormalized so the pmf sums to 1.
struct TrafficModel {
  double lambda_mean_active = 0.0;
  std::uint32_t truncation = 0;

  TrafficModel(double lambda_mean_active, std::uint32_t truncation);
};

/// Packet size and timing budget for the pre-scheduled (SPS) uplink capacity
/// analysis. All durations exact; packet size in bits.
struct SpsParams {
  std::uint64_t packet_bits = 0;
  Duration t_uplink_deadline;
  Duration t_resource_gap;
  Duration t_available;
  Duration t_lbt;

  SpsParams(std::uint64_t packet_bits, Duration t_uplink_deadline, Duration t_resource_gap,
            Duration t_available, Duration t_lbt);
};

/// Probability that a sub-resource is held by another system (WiFi, another
/// operator, ...) at the start of a slot, i.i.d. per sub-resource.
struct ExternalOccupancy {
  double busy_probability = 0.0;

  ExternalOccupancy() = default;
  explicit ExternalOccupancy(double busy_probability);
};

/// One user's sensing/transmission decision in a simulated slot.
/// chosen_sr is empty when the user found no free sub-resource (blocked).
struct UeDecision {
  std::uint32_t ue_index = 0;
  std::uint32_t sensing_slot = 0;
  std::optional<std::uint32_t> chosen_sr;
  bool failed = false;
};

/// Group-level result of one simulated slot. A slot counts as collided when
/// any user collided or was blocked.
struct SlotOutcome {
  std::vector<UeDecision> decisions;
  bool group_collided = false;
  std::uint32_t n_collided = 0;
  std::uint32_t n_blocked = 0;
};

/// Monte Carlo probability estimate with binomial standard error.
struct McEstimate {
  double p_hat = 0.0;
  double std_error = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

/// 2-D user location in meters.
struct UePosition {
  std::uint32_t ue_id = 0;
  double x = 0.0;
  double y = 0.0;

  UePosition() = default;
  UePosition(std::uint32_t ue_id, double x, double y);
};

/// Rejects JSON objects containing keys outside `allowed` (typo guard).
void require_only_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                       const std::string& context);

}  // namespace srsim

// JSON mapping, field names identical to the member names (microsecond fields
// carry Duration values serialized as microseconds). Parsing validates through
// the type constructors, so malformed values throw srsim::ConfigError.
namespace nlohmann {

template <>
struct adl_serializer<srsim::GroupConfig> {
  static void to_json(json& j, const srsim::GroupConfig& v);
  static srsim::GroupConfig from_json(const json& j);
};

template <>
struct adl_serializer<srsim::SensingConfig> {
  static void to_json(json& j, const srsim::SensingConfig& v);
  static srsim::SensingConfig from_json(const json& j);
};

template <>
struct adl_serializer<srsim::TrafficModel> {
  static void to_json(json& j, const srsim::TrafficModel& v);
  static srsim::TrafficModel from_json(const json& j);
};

template <>
struct adl_serializer<srsim::SpsParams> {
  static void to_json(json& j, const srsim::SpsParams& v);
  static srsim::SpsParams from_json(const json& j);
};

template <>
struct adl_serializer<srsim::ExternalOccupancy> {
  static void to_json(json& j, const srsim::ExternalOccupancy& v);
  static srsim::ExternalOccupancy from_json(const json& j);
};

}  // namespace nlohmann
