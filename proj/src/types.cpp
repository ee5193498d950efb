#include "srsim/types.hpp"

#include <cmath>
#include <limits>

namespace srsim {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw ConfigError(message);
}

void require_finite(double v, const std::string& name) {
  require(std::isfinite(v), name + " must be finite, got " + std::to_string(v));
}

}  // namespace

std::string to_string(Scheme scheme) {
  return scheme == Scheme::Srs ? "srs" : "contention";
}

Scheme scheme_from_string(const std::string& text) {
  if (text == "srs") return Scheme::Srs;
  if (text == "contention") return Scheme::Contention;
  throw ConfigError("unknown scheme '" + text + "' (expected 'srs' or 'contention')");
}

Duration Duration::from_us(double microseconds) {
  require_finite(microseconds, "duration");
  const double ns = microseconds * 1000.0;
  const double rounded = std::nearbyint(ns);
  require(std::abs(ns - rounded) < 1e-6,
          "duration " + std::to_string(microseconds) +
              " us is finer than 1 ns and cannot be represented exactly");
  require(std::abs(rounded) < 9.0e18, "duration out of range");
  return Duration{static_cast<std::int64_t>(rounded)};
}

GroupConfig::GroupConfig(std::uint32_t k, std::uint32_t l, std::uint32_t ng, std::uint32_t nu)
    : k_subresources(k), l_sensing_slots(l), n_group_size(ng), n_groups(nu) {
  require(k >= 1, "k_subresources must be >= 1");
  require(l >= 1, "l_sensing_slots must be >= 1");
  require(ng >= 1, "n_group_size must be >= 1");
  require(nu >= 1, "n_groups must be >= 1");
}

SensingConfig::SensingConfig(Duration t_i, Duration t_a, std::uint32_t l)
    : t_initial(t_i), t_additional(t_a), l_sensing_slots(l) {
  require(t_i.ns >= 0, "t_initial must be >= 0");
  require(t_a.ns > 0, "t_additional must be > 0");
  require(l >= 1, "l_sensing_slots must be >= 1");
}

Duration SensingConfig::slot_duration(std::uint32_t slot) const {
  if (slot >= l_sensing_slots) {
    throw ConfigError("sensing slot " + std::to_string(slot) + " out of range [0, " +
                      std::to_string(l_sensing_slots) + ")");
  }
  return Duration{t_initial.ns + t_additional.ns * static_cast<std::int64_t>(slot)};
}

TrafficModel::TrafficModel(double lambda, std::uint32_t trunc)
    : lambda_mean_active(lambda), truncation(trunc) {
  require_finite(lambda, "lambda_mean_active");
  require(lambda >= 0.0, "lambda_mean_active must be >= 0");
  require(trunc >= 1, "truncation must be >= 1");
}

SpsParams::SpsParams(std::uint64_t bits, Duration t_u, Duration t_g, Duration t_au, Duration t_lbt_)
    : packet_bits(bits),
      t_uplink_deadline(t_u),
      t_resource_gap(t_g),
      t_available(t_au),
      t_lbt(t_lbt_) {
  require(bits >= 1, "packet_bits must be >= 1");
  require(t_u.ns > 0, "t_uplink_deadline must be > 0");
  require(t_g.ns >= 0, "t_resource_gap must be >= 0");
  require(t_g <= t_u, "t_resource_gap must be <= t_uplink_deadline");
  require(t_au.ns > 0, "t_available must be > 0");
  require(t_au <= t_u, "t_available must be <= t_uplink_deadline");
  require(t_lbt_.ns >= 0, "t_lbt must be >= 0");
}

ExternalOccupancy::ExternalOccupancy(double q) : busy_probability(q) {
  require_finite(q, "busy_probability");
  require(q >= 0.0 && q <= 1.0, "busy_probability must be in [0, 1]");
}

UePosition::UePosition(std::uint32_t id, double x_, double y_) : ue_id(id), x(x_), y(y_) {
  require_finite(x_, "x");
  require_finite(y_, "y");
}

namespace {

double get_number(const nlohmann::json& j, const char* key, const std::string& context) {
  if (!j.contains(key)) throw ConfigError(context + ": missing key '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_number()) throw ConfigError(context + ": key '" + key + "' must be a number");
  return v.get<double>();
}

std::uint32_t get_count(const nlohmann::json& j, const char* key, const std::string& context) {
  const double v = get_number(j, key, context);
  if (v < 0 || v != std::floor(v) || v > static_cast<double>(std::numeric_limits<std::uint32_t>::max())) {
    throw ConfigError(context + ": key '" + key + "' must be a nonnegative integer");
  }
  return static_cast<std::uint32_t>(v);
}

}  // namespace

void require_only_keys(const nlohmann::json& j, const std::vector<std::string>& allowed,
                       const std::string& context) {
  if (!j.is_object()) throw ConfigError(context + ": expected a JSON object");
  for (const auto& item : j.items()) {
    bool known = false;
    for (const auto& key : allowed) {
      if (item.key() == key) {
        known = true;
        break;
      }
    }
    if (!known) throw ConfigError(context + ": unknown key '" + item.key() + "'");
  }
}

}  // namespace srsim

namespace nlohmann {

using srsim::ConfigError;
using srsim::Duration;

void adl_serializer<srsim::GroupConfig>::to_json(json& j, const srsim::GroupConfig& v) {
  j = json{{"k_subresources", v.k_subresources},
           {"l_sensing_slots", v.l_sensing_slots},
           {"n_group_size", v.n_group_size},
           {"n_groups", v.n_groups}};
}

srsim::GroupConfig adl_serializer<srsim::GroupConfig>::from_json(const json& j) {
  srsim::require_only_keys(j, {"k_subresources", "l_sensing_slots", "n_group_size", "n_groups"},
                           "group");
  return srsim::GroupConfig(
      srsim::get_count(j, "k_subresources", "group"), srsim::get_count(j, "l_sensing_slots", "group"),
      srsim::get_count(j, "n_group_size", "group"), srsim::get_count(j, "n_groups", "group"));
}

void adl_serializer<srsim::SensingConfig>::to_json(json& j, const srsim::SensingConfig& v) {
  j = json{{"t_initial", v.t_initial.us()},
           {"t_additional", v.t_additional.us()},
           {"l_sensing_slots", v.l_sensing_slots}};
}

srsim::SensingConfig adl_serializer<srsim::SensingConfig>::from_json(const json& j) {
  srsim::require_only_keys(j, {"t_initial", "t_additional", "l_sensing_slots"}, "sensing");
  return srsim::SensingConfig(Duration::from_us(srsim::get_number(j, "t_initial", "sensing")),
                              Duration::from_us(srsim::get_number(j, "t_additional", "sensing")),
                              srsim::get_count(j, "l_sensing_slots", "sensing"));
}

void adl_serializer<srsim::TrafficModel>::to_json(json& j, const srsim::TrafficModel& v) {
  j = json{{"lambda_mean_active", v.lambda_mean_active}, {"truncation", v.truncation}};
}

srsim::TrafficModel adl_serializer<srsim::TrafficModel>::from_json(const json& j) {
  srsim::require_only_keys(j, {"lambda_mean_active", "truncation"}, "traffic");
  return srsim::TrafficModel(srsim::get_number(j, "lambda_mean_active", "traffic"),
                             srsim::get_count(j, "truncation", "traffic"));
}

void adl_serializer<srsim::SpsParams>::to_json(json& j, const srsim::SpsParams& v) {
  j = json{{"packet_bits", v.packet_bits},
           {"t_uplink_deadline", v.t_uplink_deadline.us()},
           {"t_resource_gap", v.t_resource_gap.us()},
           {"t_available", v.t_available.us()},
           {"t_lbt", v.t_lbt.us()}};
}

srsim::SpsParams adl_serializer<srsim::SpsParams>::from_json(const json& j) {
  srsim::require_only_keys(
      j, {"packet_bits", "packet_bytes", "t_uplink_deadline", "t_resource_gap", "t_available", "t_lbt"},
      "sps");
  const bool has_bits = j.contains("packet_bits");
  const bool has_bytes = j.contains("packet_bytes");
  if (has_bits == has_bytes) {
    throw ConfigError("sps: specify exactly one of 'packet_bits' or 'packet_bytes'");
  }
  // Packet sizes are conventionally quoted in bytes; the x8 conversion happens
  // here, once, so the rest of the code only ever sees bits.
  std::uint64_t bits = 0;
  if (has_bytes) {
    bits = static_cast<std::uint64_t>(srsim::get_count(j, "packet_bytes", "sps")) * 8;
  } else {
    bits = srsim::get_count(j, "packet_bits", "sps");
  }
  return srsim::SpsParams(bits, Duration::from_us(srsim::get_number(j, "t_uplink_deadline", "sps")),
                          Duration::from_us(srsim::get_number(j, "t_resource_gap", "sps")),
                          Duration::from_us(srsim::get_number(j, "t_available", "sps")),
                          Duration::from_us(srsim::get_number(j, "t_lbt", "sps")));
}

void adl_serializer<srsim::ExternalOccupancy>::to_json(json& j, const srsim::ExternalOccupancy& v) {
  j = json{{"busy_probability", v.busy_probability}};
}

srsim::ExternalOccupancy adl_serializer<srsim::ExternalOccupancy>::from_json(const json& j) {
  srsim::require_only_keys(j, {"busy_probability"}, "external");
  return srsim::ExternalOccupancy(srsim::get_number(j, "busy_probability", "external"));
}

}  // namespace nlohmann
