#include "hgr/trainer.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace hgr {

Relabel relabel_from_string(const std::string& s) {
  if (s == "future") return Relabel::future;
  if (s == "none") return Relabel::none;
  throw std::invalid_argument("unknown relabel mode: " + s);
}

const char* relabel_name(Relabel r) {
  return r == Relabel::future ? "future" : "none";
}

void validate(const TrainConfig& config) {
  auto fail = [](const std::string& what) {
    throw std::invalid_argument("TrainConfig: " + what);
  };
  (void)make_env(config.env_id, config.env); // unknown id throws here
  if (config.seeds.empty()) fail("seeds must be non-empty");
  std::vector<std::uint64_t> sorted = config.seeds;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end())
    fail("seeds must be distinct");
  if (config.total_interactions == 0) fail("total_interactions must be positive");
  if (config.env.horizon == 0) fail("horizon must be positive");
  if (config.buffer_size < config.env.horizon)
    fail("buffer_size must hold at least one episode");
  if (config.batch_size == 0) fail("batch_size must be positive");
  if (config.update_frequency == 0) fail("update_frequency must be positive");
  if (config.gradient_steps == 0) fail("gradient_steps must be positive");
  for (std::size_t width : config.hidden)
    if (width == 0) fail("hidden widths must be positive");
  if (!(config.lr_actor > 0.0) || !std::isfinite(config.lr_actor))
    fail("lr_actor must be positive");
  if (!(config.lr_critic > 0.0) || !std::isfinite(config.lr_critic))
    fail("lr_critic must be positive");
  if (!(config.gamma >= 0.0) || config.gamma >= 1.0) fail("gamma must be in [0,1)");
  if (!(config.polyak >= 0.0) || config.polyak > 1.0) fail("polyak must be in [0,1]");
  if (!(config.action_l2 >= 0.0)) fail("action_l2 must be nonnegative");
  if (!(config.alpha >= 0.0)) fail("alpha must be nonnegative");
  if (!(config.alpha_prime >= 0.0)) fail("alpha_prime must be nonnegative");
  if (!(config.beta >= 0.0) || config.beta > 1.0) fail("beta must be in [0,1]");
  if (!(config.beta_prime >= 0.0) || config.beta_prime > 1.0)
    fail("beta_prime must be in [0,1]");
  if (!(config.eps_prio > 0.0) || !std::isfinite(config.eps_prio))
    fail("eps_prio must be positive");
  if (!(config.exploration.gaussian_sigma >= 0.0)) fail("sigma must be nonnegative");
  if (!(config.exploration.epsilon_greedy >= 0.0) ||
      config.exploration.epsilon_greedy > 1.0)
    fail("epsilon must be in [0,1]");
  if (config.eval_episodes == 0) fail("eval_episodes must be positive");
  if (config.out_dir.empty()) fail("out_dir must be non-empty");
}

PrioritizationConfig prioritization_of(const TrainConfig& config) {
  PrioritizationConfig p;
  p.alpha = config.alpha;
  p.alpha_prime = config.alpha_prime;
  p.beta0 = config.beta;
  p.beta0_prime = config.beta_prime;
  p.anneal_steps =
      config.anneal_steps ? config.anneal_steps : config.total_interactions;
  p.strategy = config.strategy;
  return p;
}

std::uint64_t eval_interval_of(const TrainConfig& config) {
  return config.eval_interval
             ? config.eval_interval
             : 10 * static_cast<std::uint64_t>(config.env.horizon);
}

namespace {

// Rewards are recomputed at replay time against whatever goal the sampler
// chose; only the achieved state of s' matters, so the timestep is moot.
RewardFn replay_reward(const Env& env) {
  const double tolerance = env.spec().tolerance;
  return [&env, tolerance](const Transition& tr, const GoalValue& goal) {
    return sparse_reward(env.achieved_goal({tr.next_state, 0}), goal,
                         tolerance);
  };
}

// Targets, optional priority refresh, critic step, actor step — shared by
// both cycle flavors so the reduction comparison exercises identical code.
void apply_batch(AgentNetworks& nets, std::vector<BatchItem>& batch,
                 const std::vector<SampledItem>* sampled, ReplayBuffer* buffer,
                 const TrainConfig& config, const RewardFn& reward,
                 CycleStats& stats, double& abs_td_sum, std::size_t& items) {
  const std::vector<double> deltas =
      prepare_batch(nets, batch, reward, config.gamma);
  for (std::size_t m = 0; m < deltas.size(); ++m) {
    if (sampled != nullptr)
      update_priorities(*buffer, (*sampled)[m].episode_id,
                        {(*sampled)[m].j, (*sampled)[m].i},
                        std::abs(deltas[m]));
    abs_td_sum += std::abs(deltas[m]);
  }
  items += deltas.size();
  if (!critic_update(nets, batch, config.lr_critic)) ++stats.rejected_steps;
  if (!actor_update(nets, batch, config.action_l2, config.lr_actor))
    ++stats.rejected_steps;
  ++stats.steps;
}

} // namespace

EpisodeData rollout_episode(const Env& env, const AgentNetworks& nets,
                            const ExplorationConfig& exploration,
                            std::uint64_t episode_seed, Rng& action_rng) {
  const std::size_t H = env.spec().horizon;
  EpisodeData ep;
  ep.transitions.reserve(H);
  ep.achieved_goals.reserve(H + 1);

  auto [state, goal] = env.reset(episode_seed);
  ep.achieved_goals.push_back(env.achieved_goal(state));
  for (std::size_t t = 0; t < H; ++t) {
    Transition tr;
    tr.state = state.features;
    tr.action =
        behavior_action(nets, state.features, goal, exploration, action_rng);
    EnvState next = env.step(state, tr.action);
    tr.next_state = next.features;
    tr.episode_goal = goal;
    ep.achieved_goals.push_back(env.achieved_goal(next));
    ep.transitions.push_back(std::move(tr));
    state = std::move(next);
  }
  return ep;
}

CycleStats optimize_cycle(AgentNetworks& nets, ReplayBuffer& buffer,
                          const TrainConfig& config, const Env& env,
                          std::uint64_t global_step, Rng& rng) {
  if (buffer.size() == 0)
    throw std::invalid_argument("optimize_cycle: empty replay buffer");
  const RewardFn reward = replay_reward(env);
  const PrioritizationConfig prio = prioritization_of(config);

  CycleStats stats;
  double abs_td_sum = 0.0;
  std::size_t items = 0;
  for (std::size_t g = 0; g < config.gradient_steps; ++g) {
    const std::vector<SampledItem> sampled =
        sample_batch(buffer, prio, config.batch_size, global_step, rng);
    std::vector<BatchItem> batch;
    batch.reserve(sampled.size());
    for (const SampledItem& item : sampled) {
      BatchItem b;
      b.transition = item.transition;
      b.goal = config.relabel == Relabel::future ? item.goal
                                                 : item.transition->episode_goal;
      b.weight = item.weight;
      batch.push_back(std::move(b));
    }
    apply_batch(nets, batch, &sampled, &buffer, config, reward, stats,
                abs_td_sum, items);
  }
  sync_targets(nets, config.polyak);
  stats.mean_abs_td = items ? abs_td_sum / static_cast<double>(items) : 0.0;
  return stats;
}

CycleStats uniform_her_cycle(AgentNetworks& nets, const ReplayBuffer& buffer,
                             const TrainConfig& config, const Env& env,
                             Rng& rng) {
  if (buffer.size() == 0)
    throw std::invalid_argument("uniform_her_cycle: empty replay buffer");
  const RewardFn reward = replay_reward(env);
  const std::size_t n = buffer.size();
  const std::size_t k = pair_count(buffer.horizon());

  CycleStats stats;
  double abs_td_sum = 0.0;
  std::size_t items = 0;
  for (std::size_t g = 0; g < config.gradient_steps; ++g) {
    std::vector<BatchItem> batch;
    batch.reserve(config.batch_size);
    for (std::size_t m = 0; m < config.batch_size; ++m) {
      // Same two draws per item as the prioritized sampler, which makes the
      // streams comparable; with unit leaves its tree descent is this floor.
      const double u_episode = rng.uniform01() * static_cast<double>(n);
      const std::size_t slot =
          std::min(n - 1, static_cast<std::size_t>(u_episode));
      const double u_pair = rng.uniform01() * static_cast<double>(k);
      const std::size_t flat =
          std::min(k - 1, static_cast<std::size_t>(u_pair));
      const auto [j, i] = pair_from_index(flat, buffer.horizon());

      const EpisodeRecord& rec = buffer.episode(slot);
      BatchItem b;
      b.transition = &rec.data.transitions[j];
      b.goal = config.relabel == Relabel::future
                   ? rec.data.achieved_goals[i]
                   : rec.data.transitions[j].episode_goal;
      b.weight = 1.0;
      batch.push_back(std::move(b));
    }
    apply_batch(nets, batch, nullptr, nullptr, config, reward, stats,
                abs_td_sum, items);
  }
  sync_targets(nets, config.polyak);
  stats.mean_abs_td = items ? abs_td_sum / static_cast<double>(items) : 0.0;
  return stats;
}

EvalResult evaluate(const AgentNetworks& nets, const Env& env,
                    std::size_t n_episodes, std::uint64_t seed) {
  if (n_episodes == 0)
    throw std::invalid_argument("evaluate: n_episodes must be positive");
  const std::size_t H = env.spec().horizon;
  const double tolerance = env.spec().tolerance;

  double successes = 0.0, return_sum = 0.0;
  for (std::size_t e = 0; e < n_episodes; ++e) {
    auto [state, goal] = env.reset(Rng::derive(seed, e));
    double last_reward = -1.0;
    for (std::size_t t = 0; t < H; ++t) {
      state = env.step(state, policy_action(nets, state.features, goal));
      last_reward = sparse_reward(env.achieved_goal(state), goal, tolerance);
      return_sum += last_reward;
    }
    if (last_reward == 0.0) successes += 1.0;
  }
  const double n = static_cast<double>(n_episodes);
  return {successes / n, return_sum / n};
}

namespace {

void write_row(std::ostream& metrics, std::uint64_t seed, std::uint64_t epoch,
               std::uint64_t interactions, const EvalResult& res,
               double wall_secs) {
  std::ostringstream row;
  row << seed << ',' << epoch << ',' << interactions << ','
      << std::setprecision(10) << res.success_rate << ','
      << std::setprecision(10) << res.mean_return << ',' << std::fixed
      << std::setprecision(3) << wall_secs;
  metrics << row.str() << '\n';
  metrics.flush();
}

} // namespace

void train_seed(const TrainConfig& config, std::uint64_t seed,
                std::ostream& metrics) {
  const auto start = std::chrono::steady_clock::now();
  auto wall = [&start] {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                         start)
        .count();
  };

  const std::unique_ptr<Env> env = make_env(config.env_id, config.env);
  const EnvSpec& spec = env->spec();

  AgentConfig agent_cfg;
  agent_cfg.state_dim = spec.state_dim;
  agent_cfg.goal_dim = spec.goal_dim;
  agent_cfg.action_dim = spec.action_dim;
  agent_cfg.hidden = config.hidden;
  agent_cfg.lr = config.lr_critic;
  agent_cfg.gamma = config.gamma;
  agent_cfg.polyak = config.polyak;
  agent_cfg.action_l2_coeff = config.action_l2;
  agent_cfg.exploration = config.exploration;

  // Independent derived streams so init, exploration, and sampling stay
  // reproducible regardless of how often the others are consumed.
  Rng init_rng(Rng::derive(seed, 1));
  Rng action_rng(Rng::derive(seed, 2));
  Rng sample_rng(Rng::derive(seed, 3));
  AgentNetworks nets = AgentNetworks::make(agent_cfg, init_rng);

  BufferConfig buf_cfg;
  buf_cfg.buffer_size = config.buffer_size;
  buf_cfg.horizon = spec.horizon;
  buf_cfg.strategy = config.strategy;
  buf_cfg.alpha = config.alpha;
  buf_cfg.alpha_prime = config.alpha_prime;
  buf_cfg.eps_prio = config.eps_prio;
  ReplayBuffer buffer(buf_cfg);

  const std::uint64_t H = spec.horizon;
  const std::uint64_t eval_every = eval_interval_of(config);

  auto run_eval = [&](std::uint64_t epoch,
                      std::uint64_t interactions) -> EvalResult {
    // Fresh goals each epoch, identical across strategies for a fixed seed.
    const EvalResult res = evaluate(nets, *env, config.eval_episodes,
                                    Rng::derive(seed, 40000 + epoch));
    write_row(metrics, seed, epoch, interactions, res, wall());
    return res;
  };

  run_eval(0, 0);
  std::uint64_t interactions = 0, episodes = 0;
  while (interactions < config.total_interactions) {
    EpisodeData ep =
        rollout_episode(*env, nets, config.exploration,
                        Rng::derive(seed, 1000003 + episodes), action_rng);
    buffer.store_episode(std::move(ep), buffer.max_priority());
    ++episodes;
    interactions += H;
    if (episodes % config.update_frequency == 0)
      optimize_cycle(nets, buffer, config, *env, interactions, sample_rng);
    if (interactions / eval_every > (interactions - H) / eval_every) {
      const std::uint64_t epoch = interactions / eval_every;
      const EvalResult res = run_eval(epoch, interactions);
      if (res.success_rate >= config.early_stop_success) break;
    }
  }

  const std::string path = checkpoint_path(config.out_dir, seed);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path);
  save_agent(out, nets);
  if (!out) throw std::runtime_error("failed writing " + path);
}

std::string checkpoint_path(const std::string& out_dir, std::uint64_t seed) {
  return out_dir + "/agent_seed" + std::to_string(seed) + ".ckpt";
}

std::string run_training(const TrainConfig& config) {
  validate(config);
  std::filesystem::create_directories(config.out_dir);
  const std::string path = config.out_dir + "/metrics.csv";
  std::ofstream metrics(path, std::ios::trunc);
  if (!metrics) throw std::runtime_error("cannot open " + path);
  metrics << "seed,epoch,interactions,success_rate,mean_return,wall_secs\n";
  metrics.flush();
  for (std::uint64_t seed : config.seeds) train_seed(config, seed, metrics);
  if (!metrics) throw std::runtime_error("failed writing " + path);
  return path;
}

} // namespace hgr
