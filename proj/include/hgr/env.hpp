#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

namespace hgr {

using GoalValue = std::vector<double>;

struct EnvSpec {
  std::string id;
  std::size_t state_dim = 0, action_dim = 0, goal_dim = 0;
  std::size_t horizon = 30;
  double tolerance = 0.05; // rho
  double dt = 0.1, v_max = 1.0;
  double workspace_lo = -1.0, workspace_hi = 1.0;
  double contact_radius = 0.2; // point-push only
};

struct EnvState {
  std::vector<double> features;
  std::size_t timestep = 0;
};

// Physical constants adjustable from TrainConfig.
struct EnvOptions {
  std::size_t horizon = 30;
  double tolerance = 0.05;
  double dt = 0.1;
  double v_max = 1.0;
  double contact_radius = 0.2;
};

// 0 iff the Euclidean distance is strictly below tolerance, else -1. Pure
// function; the replay path recomputes it on relabeled goals.
double sparse_reward(const GoalValue& achieved, const GoalValue& goal,
                     double tolerance);

// Environments are stateless transition functions: reset/step take and
// return explicit state, so replays and evaluations cannot interfere.
class Env {
public:
  virtual ~Env() = default;
  const EnvSpec& spec() const { return spec_; }

  // Deterministic in seed. The goal is fixed for the episode and sampled at
  // least `tolerance` away from the initial achieved goal.
  virtual std::pair<EnvState, GoalValue> reset(std::uint64_t seed) const = 0;

  // Actions are clipped to [-1,1] per component. Throws std::invalid_argument
  // when called on a state whose timestep has reached the horizon.
  virtual EnvState step(const EnvState& state,
                        const std::vector<double>& action) const = 0;

  virtual GoalValue achieved_goal(const EnvState& state) const = 0;

protected:
  explicit Env(EnvSpec spec) : spec_(std::move(spec)) {}
  EnvSpec spec_;
};

// ids: "point-reach", "point-push". Unknown id throws std::invalid_argument.
std::unique_ptr<Env> make_env(const std::string& id,
                              const EnvOptions& options = {});

} // namespace hgr
