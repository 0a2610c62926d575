#include "hgr/prioritization.hpp"

#include <cmath>
#include <stdexcept>

namespace hgr {

std::pair<std::size_t, double> sample_episode(const ReplayBuffer& buffer,
                                              Rng& rng) {
  if (buffer.size() == 0)
    throw std::invalid_argument("sample_episode: buffer is empty");
  const SumTree& tree = buffer.tree();
  const double total = tree.total();
  const std::size_t slot = tree.sample_prefix(rng.uniform01() * total);
  return {slot, tree.leaf(slot) / total};
}

namespace {

// Prefix scan over powered priorities; picks the leftmost entry whose
// half-open cumulative interval contains u. `values` must all be positive.
std::size_t scan_pick(const std::vector<double>& values, double u,
                      double& out_value) {
  double cum = 0.0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    cum += values[k];
    if (u < cum) {
      out_value = values[k];
      return k;
    }
  }
  out_value = values.back(); // mass-sum rounding tail
  return values.size() - 1;
}

} // namespace

std::pair<std::pair<std::size_t, std::size_t>, double> sample_pair(
    const PairPriorityTable& table, double alpha_prime, Rng& rng) {
  if (table.K() == 0)
    throw std::invalid_argument("sample_pair: empty pair table");

  double picked = 0.0;
  std::size_t flat = 0;
  double mass = 0.0;
  if (alpha_prime == table.exponent()) {
    mass = table.powered_sum();
    if (!(mass > 0.0) || !std::isfinite(mass))
      throw std::invalid_argument("sample_pair: corrupt pair table");
    flat = scan_pick(table.powered_values(), rng.uniform01() * mass, picked);
  } else {
    // Exponent differs from the cached one (ablation probes): power on the fly.
    const std::vector<double>& raw = table.raw_values();
    std::vector<double> powered(raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k) {
      if (!(raw[k] > 0.0))
        throw std::invalid_argument("sample_pair: corrupt pair table");
      powered[k] = std::pow(raw[k], alpha_prime);
      mass += powered[k];
    }
    flat = scan_pick(powered, rng.uniform01() * mass, picked);
  }
  return {pair_from_index(flat, table.horizon()), picked / mass};
}

double importance_weight(double p_n, double p_pair, std::size_t n_episodes,
                         std::size_t k_pairs, double beta, double beta_prime) {
  if (!(p_n > 0.0) || !(p_pair > 0.0))
    throw std::invalid_argument("importance_weight: zero probability");
  if (n_episodes == 0 || k_pairs == 0)
    throw std::invalid_argument("importance_weight: empty population");
  const double w_episode =
      std::pow(1.0 / (static_cast<double>(n_episodes) * p_n), beta);
  const double w_pair =
      std::pow(1.0 / (static_cast<double>(k_pairs) * p_pair), beta_prime);
  return w_episode * w_pair;
}

double anneal_beta(std::uint64_t step, std::uint64_t anneal_steps,
                   double beta0) {
  // beta0 == 0 means importance correction is off; annealing it toward 1
  // would silently re-enable it and break the exact-uniform reduction.
  if (beta0 == 0.0) return 0.0;
  if (anneal_steps == 0) return 1.0;
  const double frac =
      static_cast<double>(step) / static_cast<double>(anneal_steps);
  const double beta = beta0 + (1.0 - beta0) * frac;
  return beta < 1.0 ? beta : 1.0;
}

void update_priorities(ReplayBuffer& buffer, std::size_t episode_id,
                       std::pair<std::size_t, std::size_t> pair,
                       double td_abs) {
  if (!std::isfinite(td_abs) || td_abs < 0.0)
    throw std::invalid_argument("update_priorities: td_abs must be finite and >= 0");
  const double priority = td_abs + buffer.config().eps_prio;
  PairPriorityTable& table = buffer.episode_mut(episode_id).pair_table;
  if (buffer.config().strategy == Strategy::per) {
    table.update_row(pair.first, priority);
  } else {
    table.update(pair_index(pair.first, pair.second, buffer.horizon()),
                 priority);
  }
  buffer.refresh_leaf(episode_id);
  buffer.observe_priority(priority);
}

namespace {

SampledItem sample_item_per(const ReplayBuffer& buffer, double beta,
                            double beta_prime, Rng& rng) {
  // One-step PER over the flattened transition set: the episode leaf holds
  // sum_j q_j^alpha, so tree draw + in-episode row draw is exactly a draw
  // proportional to q_j^alpha over all live transitions. The hindsight goal
  // index i is uniform over the future states, fully compensated in the
  // weight (its K factor is H - j), leaving the pure PER correction.
  const auto [slot, p_episode] = sample_episode(buffer, rng);
  const EpisodeRecord& rec = buffer.episode(slot);
  const std::size_t H = buffer.horizon();

  std::vector<double> row_heads(H);
  for (std::size_t j = 0; j < H; ++j)
    row_heads[j] = rec.pair_table.powered(pair_index(j, j + 1, H));
  double mass = 0.0;
  for (const double v : row_heads) mass += v;
  double picked = 0.0;
  const std::size_t j = scan_pick(row_heads, rng.uniform01() * mass, picked);
  const double p_row = picked / mass;

  const std::size_t span = H - j;
  const std::size_t i =
      j + 1 +
      std::min(span - 1, static_cast<std::size_t>(rng.uniform01() *
                                                  static_cast<double>(span)));

  SampledItem item;
  item.episode_id = slot;
  item.j = j;
  item.i = i;
  item.p_episode = p_episode * p_row;
  item.p_pair = 1.0 / static_cast<double>(span);
  item.weight = importance_weight(item.p_episode, item.p_pair,
                                  buffer.live_transitions(), span, beta,
                                  beta_prime);
  item.goal = rec.data.achieved_goals[i];
  item.transition = &rec.data.transitions[j];
  return item;
}

} // namespace

std::vector<SampledItem> sample_batch(const ReplayBuffer& buffer,
                                      const PrioritizationConfig& config,
                                      std::size_t batch_size,
                                      std::uint64_t step, Rng& rng) {
  if (buffer.size() == 0)
    throw std::invalid_argument("sample_batch: buffer is empty");
  if (batch_size == 0)
    throw std::invalid_argument("sample_batch: batch_size must be positive");

  const bool uniform = config.strategy == Strategy::uniform;
  const double beta =
      uniform ? 0.0 : anneal_beta(step, config.anneal_steps, config.beta0);
  const double beta_prime =
      uniform ? 0.0
              : anneal_beta(step, config.anneal_steps, config.beta0_prime);
  const double alpha_prime = uniform ? 0.0 : config.alpha_prime;

  std::vector<SampledItem> batch;
  batch.reserve(batch_size);
  for (std::size_t m = 0; m < batch_size; ++m) {
    if (config.strategy == Strategy::per) {
      batch.push_back(sample_item_per(buffer, beta, beta_prime, rng));
      continue;
    }
    const auto [slot, p_episode] = sample_episode(buffer, rng);
    const EpisodeRecord& rec = buffer.episode(slot);
    const auto [pair, p_pair] = sample_pair(rec.pair_table, alpha_prime, rng);

    SampledItem item;
    item.episode_id = slot;
    item.j = pair.first;
    item.i = pair.second;
    item.p_episode = p_episode;
    item.p_pair = p_pair;
    item.weight = importance_weight(p_episode, p_pair, buffer.size(),
                                    rec.pair_table.K(), beta, beta_prime);
    item.goal = rec.data.achieved_goals[pair.second];
    item.transition = &rec.data.transitions[pair.first];
    batch.push_back(std::move(item));
  }
  return batch;
}

} // namespace hgr
