#include "srsim/sim.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <thread>

#include "srsim/analytic.hpp"

namespace srsim {

SimConfig::SimConfig(GroupConfig group_, Scheme scheme_, ExternalOccupancy external_,
                     TrafficModel traffic_, std::uint64_t trials_, std::uint64_t seed_)
    : group(group_),
      scheme(scheme_),
      external(external_),
      traffic(traffic_),
      trials(trials_),
      seed(seed_) {
  if (trials_ == 0) throw ConfigError("SimConfig: trials must be >= 1");
}

namespace {

constexpr std::int32_t kBlocked = -1;

// Reusable per-worker buffers so the trial loop does not allocate.
struct SlotScratch {
  std::vector<std::uint32_t> sensing_slot;  // per UE
  std::vector<std::int32_t> chosen;         // per UE, kBlocked when deferred
  std::vector<std::uint8_t> collided;       // per UE
  std::vector<std::uint32_t> bucket_count;  // per slot
  std::vector<std::uint32_t> bucket_pos;    // per slot, placement cursor
  std::vector<std::uint32_t> order;         // UE indices in (slot, index) order
  std::vector<std::uint8_t> sr_taken;       // per SR: externally busy or flagged
  std::vector<std::uint32_t> free_list;     // SRs free for the current slot
  std::vector<std::uint32_t> sr_count;      // per SR, within one slot group

  void ensure(std::uint32_t k, std::uint32_t l, std::uint32_t n) {
    if (sensing_slot.size() < n) {
      sensing_slot.resize(n);
      chosen.resize(n);
      collided.resize(n);
      order.resize(n);
    }
    if (bucket_count.size() < l) {
      bucket_count.resize(l);
      bucket_pos.resize(l);
    }
    if (sr_taken.size() < k) {
      sr_taken.resize(k);
      free_list.resize(k);
      sr_count.resize(k, 0);
    }
  }
};

struct SlotStats {
  std::uint32_t n_collided = 0;
  std::uint32_t n_blocked = 0;
  bool collided() const { return n_collided + n_blocked > 0; }
};

SlotStats run_slot(SlotScratch& ws, std::uint32_t n, const GroupConfig& group, Scheme scheme,
                   double q, SubstreamRng& rng) {
  const std::uint32_t k = group.k_subresources;
  const std::uint32_t l = group.l_sensing_slots;
  ws.ensure(k, l, n);

  SlotStats stats;

  for (std::uint32_t sr = 0; sr < k; ++sr) {
    ws.sr_taken[sr] = (q > 0.0 && rng.next_double() < q) ? 1 : 0;
  }

  if (scheme == Scheme::Contention) {
    for (std::uint32_t i = 0; i < n; ++i) {
      ws.sensing_slot[i] = 0;
      const std::uint32_t sr = rng.next_below(k);
      if (ws.sr_taken[sr]) {
        ws.chosen[i] = kBlocked;
        ++stats.n_blocked;
      } else {
        ws.chosen[i] = static_cast<std::int32_t>(sr);
        ++ws.sr_count[sr];
      }
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      const bool hit = ws.chosen[i] >= 0 && ws.sr_count[ws.chosen[i]] >= 2;
      ws.collided[i] = hit ? 1 : 0;
      if (hit) ++stats.n_collided;
    }
    for (std::uint32_t i = 0; i < n; ++i) {
      if (ws.chosen[i] >= 0) ws.sr_count[ws.chosen[i]] = 0;
    }
    return stats;
  }

  for (std::uint32_t i = 0; i < n; ++i) {
    ws.sensing_slot[i] = rng.next_below(l);
  }

  // Stable counting sort by sensing slot keeps users in ascending index
  // within each slot, which fixes the intra-slot draw order.
  std::fill(ws.bucket_count.begin(), ws.bucket_count.begin() + l, 0u);
  for (std::uint32_t i = 0; i < n; ++i) ++ws.bucket_count[ws.sensing_slot[i]];
  std::uint32_t running = 0;
  for (std::uint32_t slot = 0; slot < l; ++slot) {
    ws.bucket_pos[slot] = running;
    running += ws.bucket_count[slot];
  }
  for (std::uint32_t i = 0; i < n; ++i) ws.order[ws.bucket_pos[ws.sensing_slot[i]]++] = i;

  std::uint32_t begin = 0;
  for (std::uint32_t slot = 0; slot < l && begin < n; ++slot) {
    const std::uint32_t members = ws.bucket_count[slot];
    if (members == 0) continue;
    const std::uint32_t end = begin + members;

    std::uint32_t n_free = 0;
    for (std::uint32_t sr = 0; sr < k; ++sr) {
      if (!ws.sr_taken[sr]) ws.free_list[n_free++] = sr;
    }

    if (n_free == 0) {
      for (std::uint32_t pos = begin; pos < end; ++pos) {
        ws.chosen[ws.order[pos]] = kBlocked;
        ws.collided[ws.order[pos]] = 0;
        ++stats.n_blocked;
      }
    } else {
      // All members of this slot see the same snapshot and choose independently.
      for (std::uint32_t pos = begin; pos < end; ++pos) {
        const std::uint32_t sr = ws.free_list[rng.next_below(n_free)];
        ws.chosen[ws.order[pos]] = static_cast<std::int32_t>(sr);
        ++ws.sr_count[sr];
      }
      for (std::uint32_t pos = begin; pos < end; ++pos) {
        const std::uint32_t i = ws.order[pos];
        const bool hit = ws.sr_count[ws.chosen[i]] >= 2;
        ws.collided[i] = hit ? 1 : 0;
        if (hit) ++stats.n_collided;
      }
      // Flag signals: these sub-resources are occupied for longer sensers.
      for (std::uint32_t pos = begin; pos < end; ++pos) {
        const std::uint32_t sr = static_cast<std::uint32_t>(ws.chosen[ws.order[pos]]);
        ws.sr_taken[sr] = 1;
        ws.sr_count[sr] = 0;
      }
    }
    begin = end;
  }

  return stats;
}

McEstimate finish_estimate(std::uint64_t collided, std::uint64_t trials, std::uint64_t seed) {
  McEstimate est;
  est.p_hat = static_cast<double>(collided) / static_cast<double>(trials);
  est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(trials));
  est.trials = trials;
  est.seed = seed;
  return est;
}

// Shared driver for the conditional and traffic-mixed estimators. When
// cdf is null, every trial runs with fixed_n active users.
McEstimate run_monte_carlo(const GroupConfig& group, Scheme scheme, double q,
                           const std::vector<double>* cdf, std::uint32_t fixed_n,
                           std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  const auto run_range = [&](std::uint64_t first, std::uint64_t last) -> std::uint64_t {
    SlotScratch ws;
    std::uint64_t collided = 0;
    for (std::uint64_t t = first; t < last; ++t) {
      SubstreamRng rng(seed, t);
      std::uint32_t n = fixed_n;
      if (cdf != nullptr) {
        const double u = rng.next_double();
        n = static_cast<std::uint32_t>(
            std::upper_bound(cdf->begin(), cdf->end(), u) - cdf->begin());
      }
      if (run_slot(ws, n, group, scheme, q, rng).collided()) ++collided;
    }
    return collided;
  };

  std::uint64_t collided = 0;
  if (workers <= 1 || trials < 2 * workers) {
    collided = run_range(0, trials);
  } else {
    std::vector<std::uint64_t> counts(workers, 0);
    std::vector<std::thread> threads;
    threads.reserve(workers);
    const std::uint64_t chunk = trials / workers;
    for (unsigned w = 0; w < workers; ++w) {
      const std::uint64_t first = w * chunk;
      const std::uint64_t last = (w + 1 == workers) ? trials : first + chunk;
      threads.emplace_back([&, w, first, last] { counts[w] = run_range(first, last); });
    }
    for (auto& th : threads) th.join();
    for (const std::uint64_t c : counts) collided += c;
  }
  return finish_estimate(collided, trials, seed);
}

}  // namespace

SlotOutcome simulate_slot(std::uint32_t n_active, const GroupConfig& group, Scheme scheme,
                          const ExternalOccupancy& external, SubstreamRng& rng) {
  SlotScratch ws;
  const SlotStats stats = run_slot(ws, n_active, group, scheme, external.busy_probability, rng);

  SlotOutcome outcome;
  outcome.decisions.reserve(n_active);
  for (std::uint32_t i = 0; i < n_active; ++i) {
    UeDecision d;
    d.ue_index = i;
    d.sensing_slot = ws.sensing_slot[i];
    if (ws.chosen[i] >= 0) d.chosen_sr = static_cast<std::uint32_t>(ws.chosen[i]);
    d.failed = ws.chosen[i] < 0 || ws.collided[i] != 0;
    outcome.decisions.push_back(d);
  }
  outcome.n_collided = stats.n_collided;
  outcome.n_blocked = stats.n_blocked;
  outcome.group_collided = stats.collided();
  return outcome;
}

McEstimate monte_carlo_poc(const SimConfig& config, unsigned workers) {
  if (config.traffic.truncation != config.group.n_group_size) {
    throw ConfigError("monte_carlo_poc: traffic truncation must equal group size");
  }
  // Inverse-CDF table over the same pmf the closed-form path integrates.
  const std::vector<double> pmf = traffic_pmf_table(config.traffic);
  std::vector<double> cdf(pmf.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    acc += pmf[i];
    cdf[i] = acc;
  }
  cdf.back() = 1.0;
  return run_monte_carlo(config.group, config.scheme, config.external.busy_probability, &cdf, 0,
                         config.trials, config.seed, workers);
}

McEstimate monte_carlo_conditional_poc(std::uint32_t n_active, const GroupConfig& group,
                                       Scheme scheme, const ExternalOccupancy& external,
                                       std::uint64_t trials, std::uint64_t seed, unsigned workers) {
  if (trials == 0) throw ConfigError("monte_carlo_conditional_poc: trials must be >= 1");
  return run_monte_carlo(group, scheme, external.busy_probability, nullptr, n_active, trials, seed,
                         workers);
}

namespace {

constexpr std::uint64_t kEnumerationBudget = 65536;

// Exact collision probability over the free-choice branches, given the slot
// occupancy counts in ascending slot order. occupied is by value on purpose:
// each branch owns its copy.
double enumerate_choices(const std::vector<std::uint32_t>& group_sizes, std::size_t gi,
                         std::vector<std::uint8_t> occupied) {
  if (gi == group_sizes.size()) return 0.0;
  const std::uint32_t members = group_sizes[gi];
  if (members == 0) return enumerate_choices(group_sizes, gi + 1, std::move(occupied));

  std::vector<std::uint32_t> free_srs;
  for (std::uint32_t sr = 0; sr < occupied.size(); ++sr) {
    if (!occupied[sr]) free_srs.push_back(sr);
  }
  const std::uint32_t n_free = static_cast<std::uint32_t>(free_srs.size());
  if (n_free == 0) return 1.0;  // every member blocked: certain collision

  // Walk all n_free^members joint choices with an odometer.
  std::vector<std::uint32_t> pick(members, 0);
  double collision_weight = 0.0;
  double branches = 0.0;
  while (true) {
    ++branches;
    bool duplicate = false;
    for (std::uint32_t a = 0; a < members && !duplicate; ++a) {
      for (std::uint32_t b = a + 1; b < members; ++b) {
        if (pick[a] == pick[b]) {
          duplicate = true;
          break;
        }
      }
    }
    if (duplicate) {
      collision_weight += 1.0;
    } else {
      std::vector<std::uint8_t> next = occupied;
      for (const std::uint32_t p : pick) next[free_srs[p]] = 1;
      collision_weight += enumerate_choices(group_sizes, gi + 1, std::move(next));
    }

    std::uint32_t digit = 0;
    while (digit < members && ++pick[digit] == n_free) {
      pick[digit] = 0;
      ++digit;
    }
    if (digit == members) break;
  }
  return collision_weight / branches;
}

}  // namespace

double enumerate_exact_poc(std::uint32_t n_active, const GroupConfig& group, Scheme scheme) {
  const std::uint32_t k = group.k_subresources;
  const std::uint32_t l = group.l_sensing_slots;

  if (n_active <= 1) return 0.0;

  // Feasibility: the branch tree has at most L^n * K^n leaves.
  long double budget = 1.0L;
  for (std::uint32_t i = 0; i < n_active; ++i) budget *= static_cast<long double>(k) * l;
  if (budget > static_cast<long double>(kEnumerationBudget)) {
    throw ConfigError("enumerate_exact_poc: L^n * K^n exceeds enumeration budget of " +
                      std::to_string(kEnumerationBudget));
  }

  if (scheme == Scheme::Contention) {
    // No sensing and no external traffic: collision iff two picks coincide.
    std::vector<std::uint32_t> pick(n_active, 0);
    std::uint64_t bad = 0;
    std::uint64_t total = 0;
    while (true) {
      ++total;
      bool duplicate = false;
      for (std::uint32_t a = 0; a < n_active && !duplicate; ++a) {
        for (std::uint32_t b = a + 1; b < n_active; ++b) {
          if (pick[a] == pick[b]) {
            duplicate = true;
            break;
          }
        }
      }
      if (duplicate) ++bad;
      std::uint32_t digit = 0;
      while (digit < n_active && ++pick[digit] == k) {
        pick[digit] = 0;
        ++digit;
      }
      if (digit == n_active) break;
    }
    return static_cast<double>(bad) / static_cast<double>(total);
  }

  // SRS: enumerate every sensing-slot assignment, then every choice branch.
  std::vector<std::uint32_t> slots(n_active, 0);
  std::vector<std::uint32_t> group_sizes(l, 0);
  double total_collision = 0.0;
  std::uint64_t assignments = 0;
  while (true) {
    ++assignments;
    std::fill(group_sizes.begin(), group_sizes.end(), 0u);
    for (const std::uint32_t s : slots) ++group_sizes[s];
    total_collision +=
        enumerate_choices(group_sizes, 0, std::vector<std::uint8_t>(k, 0));

    std::uint32_t digit = 0;
    while (digit < n_active && ++slots[digit] == l) {
      slots[digit] = 0;
      ++digit;
    }
    if (digit == n_active) break;
  }
  return total_collision / static_cast<double>(assignments);
}

}  // namespace srsim
