#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "hgr/replay.hpp"
#include "hgr/rng.hpp"

namespace hgr {

struct PrioritizationConfig {
  double alpha = 0.6;
  double alpha_prime = 0.6;
  double beta0 = 0.4;
  double beta0_prime = 0.4;
  std::uint64_t anneal_steps = 1;
  Strategy strategy = Strategy::hgr;
};

struct SampledItem {
  std::size_t episode_id = 0;
  std::size_t j = 0, i = 0;      // experience and future-state indices
  double p_episode = 0.0;        // P(n); for per: flat transition probability
  double p_pair = 0.0;           // P'(j,i); for per: 1/(H-j), the uniform i draw
  double weight = 0.0;           // pre-normalization IS weight
  GoalValue goal;                // relabeled goal g_i
  const Transition* transition = nullptr;
};

// Episode draw through the sum-tree; returns (slot, P(n) = leaf/total).
// Throws std::invalid_argument on an empty buffer.
std::pair<std::size_t, double> sample_episode(const ReplayBuffer& buffer,
                                              Rng& rng);

// Joint (j, i) draw with P'(j,i) = p^a' / sum p^a' by linear prefix scan.
// Uses the table's powered cache when alpha_prime matches its exponent.
// Throws std::invalid_argument on an empty or zero-mass table.
std::pair<std::pair<std::size_t, std::size_t>, double> sample_pair(
    const PairPriorityTable& table, double alpha_prime, Rng& rng);

// w = (1/(N_e * P_n))^beta * (1/(K * P_pair))^beta_prime.
// Throws std::invalid_argument on nonpositive probabilities.
double importance_weight(double p_n, double p_pair, std::size_t n_episodes,
                         std::size_t k_pairs, double beta, double beta_prime);

// min(1, beta0 + (1 - beta0) * step / anneal_steps), nondecreasing in step.
// beta0 == 0 disables correction outright: the result stays 0 at every step.
double anneal_beta(std::uint64_t step, std::uint64_t anneal_steps,
                   double beta0);

// Sets the sampled pair's priority to td_abs + eps_prio (whole row for the
// per strategy), refreshes the episode's sum-tree leaf, and ratchets the
// buffer's running max priority. Throws on non-finite td_abs, leaving all
// priorities untouched.
void update_priorities(ReplayBuffer& buffer, std::size_t episode_id,
                       std::pair<std::size_t, std::size_t> pair,
                       double td_abs);

// M independent two-step draws with IS weights computed from the annealed
// beta schedule. step counts environment interactions.
std::vector<SampledItem> sample_batch(const ReplayBuffer& buffer,
                                      const PrioritizationConfig& config,
                                      std::size_t batch_size,
                                      std::uint64_t step, Rng& rng);

} // namespace hgr
