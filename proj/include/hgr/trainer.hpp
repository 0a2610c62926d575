#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hgr/agent.hpp"
#include "hgr/env.hpp"
#include "hgr/prioritization.hpp"
#include "hgr/replay.hpp"

namespace hgr {

// Goal used when replaying a transition: a future achieved state (HER) or
// the episode's original goal (no hindsight).
enum class Relabel { future, none };

Relabel relabel_from_string(const std::string& s);
const char* relabel_name(Relabel r);

struct TrainConfig {
  std::string env_id = "point-reach";
  std::vector<std::uint64_t> seeds = {1};
  std::uint64_t total_interactions = 60000;
  EnvOptions env; // horizon, tolerance, dt, v_max, contact_radius

  std::size_t buffer_size = 1000000;
  std::size_t batch_size = 256;
  std::size_t update_frequency = 1;  // optimize every U episodes
  std::size_t gradient_steps = 40;   // M-item batches per cycle
  std::vector<std::size_t> hidden = {64, 64};
  double lr_actor = 1e-3, lr_critic = 1e-3;
  double gamma = 0.98;
  double polyak = 0.95;
  double action_l2 = 1.0;

  double alpha = 0.6, alpha_prime = 0.6;
  double beta = 0.4, beta_prime = 0.4; // beta_0 values of the anneal
  std::uint64_t anneal_steps = 0;      // 0: anneal over total_interactions
  Strategy strategy = Strategy::hgr;
  Relabel relabel = Relabel::future;
  double eps_prio = 1e-6;

  ExplorationConfig exploration;
  std::size_t eval_episodes = 10;
  std::uint64_t eval_interval = 0;     // 0: 10 * horizon
  double early_stop_success = 2.0;     // > 1 never triggers
  std::string out_dir = "runs/out";
};

// Throws std::invalid_argument naming the first invalid field.
void validate(const TrainConfig& config);

// The effective two-step sampler settings: anneal_steps and eval_interval
// resolve their 0-means-default encodings.
PrioritizationConfig prioritization_of(const TrainConfig& config);
std::uint64_t eval_interval_of(const TrainConfig& config);

struct EvalResult {
  double success_rate = 0.0;
  double mean_return = 0.0;
};

struct CycleStats {
  std::size_t steps = 0;          // gradient steps applied
  std::size_t rejected_steps = 0; // Adam rejections (non-finite gradients)
  double mean_abs_td = 0.0;
};

// One episode under the behavior policy: H transitions and H+1 achieved
// goals; rewards are never stored.
EpisodeData rollout_episode(const Env& env, const AgentNetworks& nets,
                            const ExplorationConfig& exploration,
                            std::uint64_t episode_seed, Rng& action_rng);

// gradient_steps batches of: sample, recompute rewards against the replay
// goals, TD errors, priority refresh, critic step, actor step. Targets sync
// once at the end. Throws on an empty buffer.
CycleStats optimize_cycle(AgentNetworks& nets, ReplayBuffer& buffer,
                          const TrainConfig& config, const Env& env,
                          std::uint64_t global_step, Rng& rng);

// Dedicated vanilla-HER cycle: episode uniform, pair uniform, unit weights,
// no priority bookkeeping. The prioritized path with all exponents zero must
// reproduce this bit for bit.
CycleStats uniform_her_cycle(AgentNetworks& nets, const ReplayBuffer& buffer,
                             const TrainConfig& config, const Env& env,
                             Rng& rng);

// Noise-free policy rollouts; success iff the final step's reward is 0.
EvalResult evaluate(const AgentNetworks& nets, const Env& env,
                    std::size_t n_episodes, std::uint64_t seed);

// Full loop for one seed. Appends one CSV row per epoch (including epoch 0,
// before training) to `metrics` and flushes after each row.
void train_seed(const TrainConfig& config, std::uint64_t seed,
                std::ostream& metrics);

// <out_dir>/agent_seed<k>.ckpt, where train_seed leaves its final agent.
std::string checkpoint_path(const std::string& out_dir, std::uint64_t seed);

// Runs every configured seed, writing <out_dir>/metrics.csv (header
// `seed,epoch,interactions,success_rate,mean_return,wall_secs`) and
// <out_dir>/agent_seed<k>.ckpt. Returns the metrics path.
std::string run_training(const TrainConfig& config);

} // namespace hgr
