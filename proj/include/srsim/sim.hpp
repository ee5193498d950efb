#pragma once

#include <cstdint>
#include <vector>

#include "srsim/rng.hpp"
#include "srsim/types.hpp"

namespace srsim {

/// One Monte Carlo experiment: group geometry, scheme, external occupancy,
/// traffic, trial count and seed. Results are a pure function of this config.
struct SimConfig {
  GroupConfig group;
  Scheme scheme = Scheme::Srs;
  ExternalOccupancy external;
  TrafficModel traffic;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;

  SimConfig(GroupConfig group, Scheme scheme, ExternalOccupancy external, TrafficModel traffic,
            std::uint64_t trials, std::uint64_t seed);
};

/// Simulates one slot with n_active users.
///
/// Subband random sensing: each sub-resource is externally busy with
/// probability q; each user draws a sensing slot uniformly on [0, L). Users
/// are resolved in nondecreasing slot order. A user sees as occupied every
/// externally busy sub-resource and every sub-resource taken by a user with a
/// strictly shorter sensing duration (the flag signal transmitted right after
/// sensing); users with equal durations see the same snapshot and cannot hear
/// one another. Each user picks uniformly among the sub-resources it sees
/// free, or defers (blocked) when none is free. Two users collide when they
/// hold the same (slot, sub-resource) pair; a blocked user counts as a failure
/// as well, and does not occupy anything for later users.
///
/// Contention: every user picks uniformly among all K sub-resources with no
/// sensing. Picking an externally busy sub-resource blocks the user; two
/// non-blocked users on the same sub-resource collide.
///
/// Draw order within a trial is fixed (external busy flags by sub-resource,
/// sensing slots by user, then choices in resolution order), so outcomes are
/// reproducible from the stream alone. n_active may exceed the group size.
SlotOutcome simulate_slot(std::uint32_t n_active, const GroupConfig& group, Scheme scheme,
                          const ExternalOccupancy& external, SubstreamRng& rng);

/// Estimates the overall collision probability: per trial, draws the number
/// of active users from the truncated Poisson traffic model (same pmf as the
/// closed-form path), simulates one slot, and counts collided slots.
///
/// Trial t uses substream (seed, t), and aggregation sums integer counts, so
/// the estimate is bit-identical for any worker count.
McEstimate monte_carlo_poc(const SimConfig& config, unsigned workers = 1);

/// Same estimator with the number of active users held fixed at n_active
/// (no traffic draw). Used to compare against enumerate_exact_poc.
McEstimate monte_carlo_conditional_poc(std::uint32_t n_active, const GroupConfig& group,
                                       Scheme scheme, const ExternalOccupancy& external,
                                       std::uint64_t trials, std::uint64_t seed,
                                       unsigned workers = 1);

/// Exact group-collision probability of the mechanistic model with no external
/// traffic, by exhaustive enumeration of all sensing-slot assignments and all
/// free-choice branches with their probabilities. Feasibility bound:
/// L^n * K^n <= 65536 (covers n,K,L <= 4 as well as n = 2 with K,L <= 16);
/// throws ConfigError beyond it.
double enumerate_exact_poc(std::uint32_t n_active, const GroupConfig& group, Scheme scheme);

}  // namespace srsim
