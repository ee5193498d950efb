#pragma once

#include <cstdint>
#include <vector>

#include "srsim/types.hpp"

namespace srsim {

/// Collision probability for n simultaneously active users under subband
/// random sensing with k sub-resources and l sensing slots:
///   0 for n <= 1,
///   1 for n > k,
///   (1 - (k-1)...(k-n+1)/k^(n-1)) * (1 - (l-1)...(l-n+1)/l^(n-1)) otherwise.
/// Throws ConfigError when k == 0 or l == 0.
double pc_srs(std::uint32_t n, std::uint32_t k, std::uint32_t l);

/// Collision probability for n users picking uniformly among k shared
/// sub-resources with no sensing (at least two of n choices coincide).
/// Throws ConfigError when k == 0.
double pc_contention(std::uint32_t n, std::uint32_t k);

/// Truncated-and-renormalized Poisson pmf at n over support [0, truncation].
/// Throws ConfigError when n > truncation.
double traffic_pmf(const TrafficModel& traffic, std::uint32_t n);

/// Full pmf table, index n in [0, truncation]. Same values as traffic_pmf.
std::vector<double> traffic_pmf_table(const TrafficModel& traffic);

/// Overall collision probability: sum over n of P(n active) * P(collision | n).
/// Requires traffic.truncation == cfg.n_group_size.
double overall_collision(const TrafficModel& traffic, const GroupConfig& cfg, Scheme scheme);

/// Minimum uplink rate (bits per second) that lets n_users each deliver one
/// packet within the available window when every transmission pays the LBT
/// overhead: n * packet_bits / (t_available - n * t_lbt).
/// Exact when the integer division is exact. Throws NonPositiveTransmitTime
/// when the LBT overhead consumes the whole window.
double sps_required_rate(std::uint64_t n_users, const SpsParams& params);

/// Largest user count whose required rate stays within rate_cap_bps (0 when
/// even a single user needs more than the cap). Throws ConfigError when
/// rate_cap_bps == 0.
std::uint64_t sps_max_users(const SpsParams& params, std::uint64_t rate_cap_bps);

}  // namespace srsim
