#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "hgr/mlp.hpp"
#include "hgr/optim.hpp"
#include "hgr/replay.hpp"
#include "hgr/rng.hpp"

namespace hgr {

struct ExplorationConfig {
  double gaussian_sigma = 0.2; // stddev of the additive action noise
  double epsilon_greedy = 0.3; // probability of a uniform random action
};

struct AgentConfig {
  std::size_t state_dim = 0, goal_dim = 0, action_dim = 0;
  std::vector<std::size_t> hidden = {64, 64};
  double lr = 1e-3;
  double gamma = 0.98;
  double polyak = 0.95;          // target <- polyak*target + (1-polyak)*main
  double action_l2_coeff = 1.0;  // penalty on the deterministic tanh output
  ExplorationConfig exploration;
};

// UVFA-style DDPG networks: actor mu(s||g) with a tanh head, critic
// Q(s||g||a) with an identity head, plus exact-copy targets and the two
// optimizer states.
struct AgentNetworks {
  MlpParams actor, critic, target_actor, target_critic;
  AdamState actor_opt, critic_opt;

  static AgentNetworks make(const AgentConfig& config, Rng& rng);
};

// Recomputes the reward of a transition against a (relabeled) goal.
using RewardFn = std::function<double(const Transition&, const GoalValue&)>;

// One batch element for the update ops. `target` is the frozen bootstrap
// value r + gamma*Q_target(s', mu_target(s',g), g); `weight` is the
// pre-normalization IS weight (the critic normalizes by the batch max).
struct BatchItem {
  const Transition* transition = nullptr;
  GoalValue goal;
  double weight = 1.0;
  double target = 0.0;
};

// Deterministic policy output mu(s||g).
std::vector<double> policy_action(const AgentNetworks& nets,
                                  const std::vector<double>& state,
                                  const GoalValue& goal);

// With probability epsilon a uniform action in [-1,1]^d; otherwise the
// deterministic output plus componentwise Gaussian noise, clipped to [-1,1].
std::vector<double> behavior_action(const AgentNetworks& nets,
                                    const std::vector<double>& state,
                                    const GoalValue& goal,
                                    const ExplorationConfig& exploration,
                                    Rng& rng);

// Q_phi(s||g||a) for an arbitrary critic (main or target).
double q_value(const MlpParams& critic, const std::vector<double>& state,
               const GoalValue& goal, const std::vector<double>& action);

// delta = r + gamma*Q_target(s', mu_target(s',g), g) - Q(s,a,g), the reward
// recomputed against the relabeled goal. Throws on non-finite results.
double td_error(const AgentNetworks& nets, const Transition& transition,
                const GoalValue& goal, const RewardFn& reward_fn,
                double gamma);

// Fills every item's frozen bootstrap target and returns the per-item TD
// errors, bitwise identical to calling td_error item by item.
std::vector<double> prepare_batch(const AgentNetworks& nets,
                                  std::vector<BatchItem>& batch,
                                  const RewardFn& reward_fn, double gamma);

// L(phi) = (1/2M) sum_i (w_i/max_w) (target_i - Q_phi)^2, the objective whose
// gradient the critic step applies.
double critic_loss(const MlpParams& critic,
                   const std::vector<BatchItem>& batch);

// Overwrites grads with dL/dphi (flat critic layout).
void critic_gradient(const MlpParams& critic,
                     const std::vector<BatchItem>& batch, Gradients& grads);

// One Adam step on the critic: each item contributes
// -(w/max_w)*delta*grad(Q)/M. Returns false (parameters and optimizer state
// untouched) when the accumulated gradient is non-finite. If deltas is
// non-null it receives target - Q at the pre-step parameters. Targets and
// the actor are never modified.
bool critic_update(AgentNetworks& nets, const std::vector<BatchItem>& batch,
                   double learning_rate,
                   std::vector<double>* deltas = nullptr);

// J(theta) = (1/M) sum_i [Q_phi(s,g,mu_theta(s,g)) - c*||mu_theta(s,g)||^2],
// the objective the actor step ascends (unweighted by IS weights).
double actor_objective(const MlpParams& actor, const MlpParams& critic,
                       const std::vector<BatchItem>& batch, double l2_coeff);

// Overwrites grads with d(-J)/dtheta; gradients reach the critic through its
// action inputs only.
void actor_gradient(const MlpParams& actor, const MlpParams& critic,
                    const std::vector<BatchItem>& batch, double l2_coeff,
                    Gradients& grads);

// One Adam step ascending J. Returns false (actor untouched) on non-finite
// accumulation. The critic and both targets are never modified.
bool actor_update(AgentNetworks& nets, const std::vector<BatchItem>& batch,
                  double l2_coeff, double learning_rate);

// Polyak-averages both target networks toward their mains.
void sync_targets(AgentNetworks& nets, double coeff);

// Versioned container bundling all four networks and both Adam states;
// round-trips bit-exactly.
void save_agent(std::ostream& os, const AgentNetworks& nets);
AgentNetworks load_agent(std::istream& is);

} // namespace hgr
