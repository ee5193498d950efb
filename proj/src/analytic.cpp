#include "srsim/analytic.hpp"

#include <string>

namespace srsim {

namespace {

// P(n independent uniform picks over m bins are all distinct),
// computed as the running product of (m-i)/m to stay inside [0, 1]
// for any m (m^(n-1) would overflow 64-bit integers quickly).
double all_distinct_prob(std::uint32_t n, std::uint32_t m) {
  double p = 1.0;
  for (std::uint32_t i = 1; i < n; ++i) {
    if (i >= m) return 0.0;
    p *= static_cast<double>(m - i) / static_cast<double>(m);
  }
  return p;
}

// Unnormalized Poisson terms lambda^k / k! with a shared rescale guard; the
// e^-lambda factor cancels in the normalization. Returns term[n] / sum(term).
double truncated_poisson(double lambda, std::uint32_t truncation, std::uint32_t n) {
  double term = 1.0;
  double total = 0.0;
  double target = 0.0;
  for (std::uint32_t k = 0; k <= truncation; ++k) {
    if (k > 0) term *= lambda / static_cast<double>(k);
    if (term > 1e290) {
      term *= 1e-290;
      total *= 1e-290;
      target *= 1e-290;
    }
    total += term;
    if (k == n) target = term;
  }
  return target / total;
}

}  // namespace

double pc_srs(std::uint32_t n, std::uint32_t k, std::uint32_t l) {
  if (k == 0) throw ConfigError("pc_srs: k must be >= 1");
  if (l == 0) throw ConfigError("pc_srs: l must be >= 1");
  if (n <= 1) return 0.0;
  if (n > k) return 1.0;
  return (1.0 - all_distinct_prob(n, k)) * (1.0 - all_distinct_prob(n, l));
}

double pc_contention(std::uint32_t n, std::uint32_t k) {
  if (k == 0) throw ConfigError("pc_contention: k must be >= 1");
  if (n <= 1) return 0.0;
  if (n > k) return 1.0;
  return 1.0 - all_distinct_prob(n, k);
}

double traffic_pmf(const TrafficModel& traffic, std::uint32_t n) {
  if (n > traffic.truncation) {
    throw ConfigError("traffic_pmf: n = " + std::to_string(n) + " exceeds truncation " +
                      std::to_string(traffic.truncation));
  }
  return truncated_poisson(traffic.lambda_mean_active, traffic.truncation, n);
}

std::vector<double> traffic_pmf_table(const TrafficModel& traffic) {
  const std::uint32_t trunc = traffic.truncation;
  std::vector<double> terms(trunc + 1);
  double term = 1.0;
  double total = 0.0;
  for (std::uint32_t k = 0; k <= trunc; ++k) {
    if (k > 0) term *= traffic.lambda_mean_active / static_cast<double>(k);
    if (term > 1e290) {
      term *= 1e-290;
      total *= 1e-290;
      for (std::uint32_t i = 0; i < k; ++i) terms[i] *= 1e-290;
    }
    terms[k] = term;
    total += term;
  }
  for (double& t : terms) t /= total;
  return terms;
}

double overall_collision(const TrafficModel& traffic, const GroupConfig& cfg, Scheme scheme) {
  if (traffic.truncation != cfg.n_group_size) {
    throw ConfigError("overall_collision: traffic truncation " + std::to_string(traffic.truncation) +
                      " must equal group size " + std::to_string(cfg.n_group_size));
  }
  const std::vector<double> pmf = traffic_pmf_table(traffic);
  double total = 0.0;
  for (std::uint32_t n = 0; n <= cfg.n_group_size; ++n) {
    const double pc = scheme == Scheme::Srs
                          ? pc_srs(n, cfg.k_subresources, cfg.l_sensing_slots)
                          : pc_contention(n, cfg.k_subresources);
    total += pmf[n] * pc;
  }
  return total;
}

namespace {

using U128 = unsigned __int128;

// Transmit time left after n users' LBT overhead, in ns; <= 0 means infeasible.
std::int64_t transmit_time_ns(std::uint64_t n_users, const SpsParams& params) {
  const U128 lbt_total = static_cast<U128>(n_users) * static_cast<U128>(params.t_lbt.ns);
  if (lbt_total >= static_cast<U128>(params.t_available.ns)) return 0;
  return params.t_available.ns - static_cast<std::int64_t>(lbt_total);
}

}  // namespace

double sps_required_rate(std::uint64_t n_users, const SpsParams& params) {
  if (n_users == 0) return 0.0;
  const std::int64_t tx_ns = transmit_time_ns(n_users, params);
  if (tx_ns <= 0) {
    throw NonPositiveTransmitTime("no transmit time left for " + std::to_string(n_users) +
                                  " users: LBT overhead covers the whole available window");
  }
  const U128 numerator = static_cast<U128>(n_users) * params.packet_bits * 1'000'000'000u;
  const U128 denominator = static_cast<U128>(tx_ns);
  if (numerator % denominator == 0) {
    // Exact rates (the interesting operating points) convert bit-exactly.
    return static_cast<double>(static_cast<std::uint64_t>(numerator / denominator));
  }
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

std::uint64_t sps_max_users(const SpsParams& params, std::uint64_t rate_cap_bps) {
  if (rate_cap_bps == 0) throw ConfigError("sps_max_users: rate_cap_bps must be > 0");

  // ok(n) is monotone decreasing in n: rate is strictly increasing while the
  // transmit time stays positive, and infeasible after.
  const auto ok = [&](std::uint64_t n) {
    if (n == 0) return true;
    const std::int64_t tx_ns = transmit_time_ns(n, params);
    if (tx_ns <= 0) return false;
    const U128 bits = static_cast<U128>(n) * params.packet_bits * 1'000'000'000u;
    return bits <= static_cast<U128>(rate_cap_bps) * static_cast<U128>(tx_ns);
  };

  // Upper bound for the search: LBT budget when t_lbt > 0, rate budget otherwise.
  std::uint64_t hi = 0;
  if (params.t_lbt.ns > 0) {
    hi = static_cast<std::uint64_t>((params.t_available.ns - 1) / params.t_lbt.ns) + 1;
  } else {
    const U128 cap_bits = static_cast<U128>(rate_cap_bps) * static_cast<U128>(params.t_available.ns);
    const U128 per_user = static_cast<U128>(params.packet_bits) * 1'000'000'000u;
    hi = static_cast<std::uint64_t>(cap_bits / per_user) + 1;
  }

  std::uint64_t lo = 0;  // ok(0) always holds
  while (lo < hi) {
    const std::uint64_t mid = lo + (hi - lo + 1) / 2;
    if (ok(mid)) {
      lo = mid;
    } else {
      hi = mid - 1;
    }
  }
  return lo;
}

}  // namespace srsim
