#include "hgr/agent.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hgr/checkpoint.hpp"

namespace hgr {

namespace {

void concat2(const std::vector<double>& a, const std::vector<double>& b,
             std::vector<double>& out) {
  out.clear();
  out.reserve(a.size() + b.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
}

void concat3(const std::vector<double>& a, const std::vector<double>& b,
             const std::vector<double>& c, std::vector<double>& out) {
  out.clear();
  out.reserve(a.size() + b.size() + c.size());
  out.insert(out.end(), a.begin(), a.end());
  out.insert(out.end(), b.begin(), b.end());
  out.insert(out.end(), c.begin(), c.end());
}

struct Scratch {
  ForwardCache actor_cache, critic_cache;
  std::vector<double> sg, sga;
};

// Frozen bootstrap target and TD error for one transition. All td_error /
// prepare_batch paths funnel through here so they agree bit for bit.
double target_and_delta(const AgentNetworks& nets, const Transition& tr,
                        const GoalValue& goal, double reward, double gamma,
                        Scratch& ws, double& target_out) {
  concat2(tr.next_state, goal, ws.sg);
  const std::vector<double>& a_next =
      mlp_forward(nets.target_actor, ws.sg, ws.actor_cache);
  concat3(tr.next_state, goal, a_next, ws.sga);
  const double q_boot =
      mlp_forward(nets.target_critic, ws.sga, ws.critic_cache)[0];
  target_out = reward + gamma * q_boot;
  concat3(tr.state, goal, tr.action, ws.sga);
  const double q = mlp_forward(nets.critic, ws.sga, ws.critic_cache)[0];
  return target_out - q;
}

void check_gamma(double gamma) {
  if (!(gamma >= 0.0) || gamma >= 1.0)
    throw std::invalid_argument("gamma must lie in [0, 1)");
}

double max_batch_weight(const std::vector<BatchItem>& batch) {
  if (batch.empty()) throw std::invalid_argument("empty batch");
  double max_w = 0.0;
  for (const BatchItem& item : batch) {
    if (item.transition == nullptr)
      throw std::invalid_argument("batch item has no transition");
    if (!std::isfinite(item.weight) || !(item.weight > 0.0))
      throw std::invalid_argument("batch weights must be finite and positive");
    max_w = std::max(max_w, item.weight);
  }
  return max_w;
}

// Shared critic pass: Q forward per item and any of loss / dL/dphi / deltas.
void accumulate_critic(const MlpParams& critic,
                       const std::vector<BatchItem>& batch, Gradients* grads,
                       std::vector<double>* deltas, double* loss_out) {
  const double max_w = max_batch_weight(batch);
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  ForwardCache cache;
  std::vector<double> in;
  const double one = 1.0;
  double loss = 0.0;
  for (const BatchItem& item : batch) {
    concat3(item.transition->state, item.goal, item.transition->action, in);
    const double q = mlp_forward(critic, in.data(), in.size(), cache)[0];
    const double delta = item.target - q;
    const double wn = item.weight / max_w;
    if (deltas != nullptr) deltas->push_back(delta);
    if (loss_out != nullptr) loss += wn * delta * delta;
    if (grads != nullptr)
      mlp_backward(critic, cache, &one, *grads, -wn * delta * inv_m);
  }
  if (loss_out != nullptr) *loss_out = 0.5 * loss * inv_m;
}

// Shared actor pass: objective and/or d(-J)/dtheta. The critic's parameter
// gradient is a mandatory mlp_backward output; it goes to a scratch buffer.
void accumulate_actor(const MlpParams& actor, const MlpParams& critic,
                      const std::vector<BatchItem>& batch, double l2_coeff,
                      Gradients* grads, double* objective_out) {
  max_batch_weight(batch); // shape/NULL validation only
  const double inv_m = 1.0 / static_cast<double>(batch.size());
  ForwardCache a_cache, c_cache;
  std::vector<double> sg, sga, dinput, dact;
  Gradients critic_scratch;
  if (grads != nullptr) {
    critic_scratch.assign(critic.data.size(), 0.0);
    dinput.resize(critic.input_dim());
  }
  const double one = 1.0;
  double objective = 0.0;
  for (const BatchItem& item : batch) {
    concat2(item.transition->state, item.goal, sg);
    const std::vector<double>& a = mlp_forward(actor, sg, a_cache);
    concat3(item.transition->state, item.goal, a, sga);
    const double q = mlp_forward(critic, sga, c_cache)[0];
    if (objective_out != nullptr) {
      double norm2 = 0.0;
      for (const double v : a) norm2 += v * v;
      objective += q - l2_coeff * norm2;
    }
    if (grads != nullptr) {
      mlp_backward(critic, c_cache, &one, critic_scratch, 1.0, dinput.data());
      const std::size_t off = sg.size();
      dact.resize(a.size());
      for (std::size_t d = 0; d < a.size(); ++d)
        dact[d] = dinput[off + d] - 2.0 * l2_coeff * a[d];
      mlp_backward(actor, a_cache, dact.data(), *grads, -inv_m);
    }
  }
  if (objective_out != nullptr) *objective_out = objective * inv_m;
}

} // namespace

AgentNetworks AgentNetworks::make(const AgentConfig& config, Rng& rng) {
  if (config.state_dim == 0 || config.goal_dim == 0 || config.action_dim == 0)
    throw std::invalid_argument("agent dimensions must be positive");
  std::vector<std::size_t> actor_sizes{config.state_dim + config.goal_dim};
  std::vector<std::size_t> critic_sizes{config.state_dim + config.goal_dim +
                                        config.action_dim};
  for (const std::size_t h : config.hidden) {
    actor_sizes.push_back(h);
    critic_sizes.push_back(h);
  }
  actor_sizes.push_back(config.action_dim);
  critic_sizes.push_back(1);

  AgentNetworks nets;
  nets.actor = MlpParams::make(actor_sizes, OutputActivation::tanh);
  nets.critic = MlpParams::make(critic_sizes, OutputActivation::identity);
  init_uniform(nets.actor, rng);
  init_uniform(nets.critic, rng);
  nets.target_actor = nets.actor;
  nets.target_critic = nets.critic;
  nets.actor_opt = AdamState::make(nets.actor.data.size());
  nets.critic_opt = AdamState::make(nets.critic.data.size());
  return nets;
}

std::vector<double> policy_action(const AgentNetworks& nets,
                                  const std::vector<double>& state,
                                  const GoalValue& goal) {
  Scratch ws;
  concat2(state, goal, ws.sg);
  return mlp_forward(nets.actor, ws.sg, ws.actor_cache);
}

std::vector<double> behavior_action(const AgentNetworks& nets,
                                    const std::vector<double>& state,
                                    const GoalValue& goal,
                                    const ExplorationConfig& exploration,
                                    Rng& rng) {
  const std::size_t d = nets.actor.output_dim();
  if (rng.uniform01() < exploration.epsilon_greedy) {
    std::vector<double> a(d);
    for (double& v : a) v = rng.uniform(-1.0, 1.0);
    return a;
  }
  std::vector<double> a = policy_action(nets, state, goal);
  for (double& v : a)
    v = std::clamp(v + exploration.gaussian_sigma * rng.normal(0.0, 1.0),
                   -1.0, 1.0);
  return a;
}

double q_value(const MlpParams& critic, const std::vector<double>& state,
               const GoalValue& goal, const std::vector<double>& action) {
  ForwardCache cache;
  std::vector<double> in;
  concat3(state, goal, action, in);
  return mlp_forward(critic, in, cache)[0];
}

double td_error(const AgentNetworks& nets, const Transition& transition,
                const GoalValue& goal, const RewardFn& reward_fn,
                double gamma) {
  check_gamma(gamma);
  Scratch ws;
  double target = 0.0;
  const double delta = target_and_delta(nets, transition, goal,
                                        reward_fn(transition, goal), gamma,
                                        ws, target);
  if (!std::isfinite(delta))
    throw std::runtime_error("td_error: non-finite network output");
  return delta;
}

std::vector<double> prepare_batch(const AgentNetworks& nets,
                                  std::vector<BatchItem>& batch,
                                  const RewardFn& reward_fn, double gamma) {
  check_gamma(gamma);
  Scratch ws;
  std::vector<double> deltas;
  deltas.reserve(batch.size());
  for (BatchItem& item : batch) {
    if (item.transition == nullptr)
      throw std::invalid_argument("batch item has no transition");
    const double reward = reward_fn(*item.transition, item.goal);
    deltas.push_back(target_and_delta(nets, *item.transition, item.goal,
                                      reward, gamma, ws, item.target));
  }
  return deltas;
}

double critic_loss(const MlpParams& critic,
                   const std::vector<BatchItem>& batch) {
  double loss = 0.0;
  accumulate_critic(critic, batch, nullptr, nullptr, &loss);
  return loss;
}

void critic_gradient(const MlpParams& critic,
                     const std::vector<BatchItem>& batch, Gradients& grads) {
  grads.assign(critic.data.size(), 0.0);
  accumulate_critic(critic, batch, &grads, nullptr, nullptr);
}

bool critic_update(AgentNetworks& nets, const std::vector<BatchItem>& batch,
                   double learning_rate, std::vector<double>* deltas) {
  if (deltas != nullptr) {
    deltas->clear();
    deltas->reserve(batch.size());
  }
  Gradients grads(nets.critic.data.size(), 0.0);
  accumulate_critic(nets.critic, batch, &grads, deltas, nullptr);
  return adam_step(nets.critic.data, grads, nets.critic_opt, learning_rate);
}

double actor_objective(const MlpParams& actor, const MlpParams& critic,
                       const std::vector<BatchItem>& batch, double l2_coeff) {
  double objective = 0.0;
  accumulate_actor(actor, critic, batch, l2_coeff, nullptr, &objective);
  return objective;
}

void actor_gradient(const MlpParams& actor, const MlpParams& critic,
                    const std::vector<BatchItem>& batch, double l2_coeff,
                    Gradients& grads) {
  grads.assign(actor.data.size(), 0.0);
  accumulate_actor(actor, critic, batch, l2_coeff, &grads, nullptr);
}

bool actor_update(AgentNetworks& nets, const std::vector<BatchItem>& batch,
                  double l2_coeff, double learning_rate) {
  Gradients grads(nets.actor.data.size(), 0.0);
  accumulate_actor(nets.actor, nets.critic, batch, l2_coeff, &grads, nullptr);
  return adam_step(nets.actor.data, grads, nets.actor_opt, learning_rate);
}

void sync_targets(AgentNetworks& nets, double coeff) {
  polyak_update(nets.target_actor, nets.actor, coeff);
  polyak_update(nets.target_critic, nets.critic, coeff);
}

void save_agent(std::ostream& os, const AgentNetworks& nets) {
  io::write_tag(os, "AGT1");
  save_mlp(os, nets.actor);
  save_mlp(os, nets.critic);
  save_mlp(os, nets.target_actor);
  save_mlp(os, nets.target_critic);
  save_adam(os, nets.actor_opt);
  save_adam(os, nets.critic_opt);
}

AgentNetworks load_agent(std::istream& is) {
  io::expect_tag(is, "AGT1");
  AgentNetworks nets;
  nets.actor = load_mlp(is);
  nets.critic = load_mlp(is);
  nets.target_actor = load_mlp(is);
  nets.target_critic = load_mlp(is);
  nets.actor_opt = load_adam(is);
  nets.critic_opt = load_adam(is);
  if (!nets.actor.congruent(nets.target_actor) ||
      !nets.critic.congruent(nets.target_critic))
    throw std::runtime_error("agent checkpoint: incongruent target networks");
  if (nets.actor_opt.first_moment.size() != nets.actor.data.size() ||
      nets.critic_opt.first_moment.size() != nets.critic.data.size())
    throw std::runtime_error("agent checkpoint: optimizer size mismatch");
  return nets;
}

} // namespace hgr
