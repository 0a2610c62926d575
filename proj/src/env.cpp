#include "hgr/env.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "hgr/rng.hpp"

namespace hgr {

double sparse_reward(const GoalValue& achieved, const GoalValue& goal,
                     double tolerance) {
  if (achieved.size() != goal.size())
    throw std::invalid_argument("sparse_reward: dimension mismatch");
  double d2 = 0.0;
  for (std::size_t i = 0; i < achieved.size(); ++i) {
    const double d = achieved[i] - goal[i];
    d2 += d * d;
  }
  return d2 < tolerance * tolerance ? 0.0 : -1.0;
}

namespace {

double clip(double v, double lo, double hi) {
  return v < lo ? lo : (v > hi ? hi : v);
}

double dist2d(const double* a, const double* b) {
  return std::hypot(a[0] - b[0], a[1] - b[1]);
}

// Agent starts in a centered sub-square so every goal in the full workspace
// is reachable within the horizon; goals cover the whole workspace.
class PointReach2D final : public Env {
public:
  explicit PointReach2D(const EnvOptions& o)
      : Env(EnvSpec{"point-reach", 2, 2, 2, o.horizon, o.tolerance, o.dt,
                    o.v_max, -1.0, 1.0, 0.0}) {}

  std::pair<EnvState, GoalValue> reset(std::uint64_t seed) const override {
    Rng rng(seed);
    EnvState s;
    s.features = {rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5)};
    GoalValue g(2);
    do {
      g[0] = rng.uniform(spec_.workspace_lo, spec_.workspace_hi);
      g[1] = rng.uniform(spec_.workspace_lo, spec_.workspace_hi);
    } while (dist2d(g.data(), s.features.data()) < spec_.tolerance);
    return {std::move(s), std::move(g)};
  }

  EnvState step(const EnvState& state,
                const std::vector<double>& action) const override {
    if (state.timestep >= spec_.horizon)
      throw std::invalid_argument("step: episode horizon already reached");
    if (action.size() != spec_.action_dim)
      throw std::invalid_argument("step: action dimension mismatch");
    EnvState next = state;
    for (int k = 0; k < 2; ++k) {
      next.features[k] += spec_.dt * spec_.v_max * clip(action[k], -1.0, 1.0);
      next.features[k] =
          clip(next.features[k], spec_.workspace_lo, spec_.workspace_hi);
    }
    next.timestep = state.timestep + 1;
    return next;
  }

  GoalValue achieved_goal(const EnvState& state) const override {
    return {state.features[0], state.features[1]};
  }
};

// State = [agent x, agent y, box x, box y]; the goal is a box position. The
// agent starts on the -x side of the box, close enough that exploration
// makes contact often, and every goal lies on the +x side, so episodes are
// solvable within the horizon by pushing roughly rightward.
class PointPush2D final : public Env {
public:
  explicit PointPush2D(const EnvOptions& o)
      : Env(EnvSpec{"point-push", 4, 2, 2, o.horizon, o.tolerance, o.dt,
                    o.v_max, -1.0, 1.0, o.contact_radius}) {
    // The non-penetration floor contact_radius - sqrt(2)*dt*v_max must stay
    // positive or the contact model cannot keep the agent outside the box.
    if (spec_.contact_radius <= std::sqrt(2.0) * spec_.dt * spec_.v_max)
      throw std::invalid_argument(
          "point-push: contact_radius must exceed the per-step displacement");
  }

  std::pair<EnvState, GoalValue> reset(std::uint64_t seed) const override {
    Rng rng(seed);
    EnvState s;
    s.features.resize(4);
    s.features[2] = rng.uniform(-0.20, -0.10);
    s.features[3] = rng.uniform(-0.10, 0.10);
    // The agent spawns already in contact, roughly behind the box, so every
    // episode exercises the contact dynamics rather than plain navigation.
    const double phi = 3.141592653589793 + rng.uniform(-0.8, 0.8);
    const double sep = spec_.contact_radius * rng.uniform(0.55, 0.95);
    s.features[0] = s.features[2] + sep * std::cos(phi);
    s.features[1] = s.features[3] + sep * std::sin(phi);
    // Goal in a forward cone from the box, so the push direction varies per
    // episode and a fixed shove cannot succeed by accident.
    const double theta = rng.uniform(-1.3, 1.3);
    const double radius = rng.uniform(0.25, 0.45);
    GoalValue g{s.features[2] + radius * std::cos(theta),
                s.features[3] + radius * std::sin(theta)};
    return {std::move(s), std::move(g)};
  }

  EnvState step(const EnvState& state,
                const std::vector<double>& action) const override {
    if (state.timestep >= spec_.horizon)
      throw std::invalid_argument("step: episode horizon already reached");
    if (action.size() != spec_.action_dim)
      throw std::invalid_argument("step: action dimension mismatch");

    const double* agent = state.features.data();
    const double* box = agent + 2;
    const double lo = spec_.workspace_lo, hi = spec_.workspace_hi;

    double disp[2], new_agent[2], new_box[2] = {box[0], box[1]};
    for (int k = 0; k < 2; ++k) {
      disp[k] = spec_.dt * spec_.v_max * clip(action[k], -1.0, 1.0);
      new_agent[k] = clip(agent[k] + disp[k], lo, hi);
    }

    const double d_before = dist2d(agent, box);
    double axis[2] = {0.0, 0.0};
    const bool in_contact = d_before < spec_.contact_radius;
    if (in_contact) {
      axis[0] = (box[0] - agent[0]) / d_before;
      axis[1] = (box[1] - agent[1]) / d_before;
      // Box takes the signed component of the agent's displacement along the
      // agent->box axis: advancing pushes it, retreating drags it, sliding
      // across leaves it in place.
      const double along = disp[0] * axis[0] + disp[1] * axis[1];
      for (int k = 0; k < 2; ++k)
        new_box[k] = clip(box[k] + along * axis[k], lo, hi);

      // When the box got pinned by a wall the agent could tunnel through it;
      // retract the agent to the separation floor. The agent is deliberately
      // not re-clamped: staying outside the box wins over staying inside the
      // workspace, and the overshoot is bounded by the floor itself.
      const double floor_sep =
          spec_.contact_radius - std::sqrt(2.0) * spec_.dt * spec_.v_max;
      const double d_after = dist2d(new_agent, new_box);
      if (d_after < floor_sep) {
        double dir[2];
        if (d_after > 1e-12) {
          dir[0] = (new_agent[0] - new_box[0]) / d_after;
          dir[1] = (new_agent[1] - new_box[1]) / d_after;
        } else {
          dir[0] = -axis[0];
          dir[1] = -axis[1];
        }
        new_agent[0] = new_box[0] + floor_sep * dir[0];
        new_agent[1] = new_box[1] + floor_sep * dir[1];
      }
    }

    EnvState next;
    next.features = {new_agent[0], new_agent[1], new_box[0], new_box[1]};
    next.timestep = state.timestep + 1;
    return next;
  }

  GoalValue achieved_goal(const EnvState& state) const override {
    return {state.features[2], state.features[3]};
  }
};

} // namespace

std::unique_ptr<Env> make_env(const std::string& id,
                              const EnvOptions& options) {
  if (options.horizon == 0 || options.tolerance <= 0.0 || options.dt <= 0.0 ||
      options.v_max <= 0.0)
    throw std::invalid_argument("make_env: invalid environment options");
  if (id == "point-reach") return std::make_unique<PointReach2D>(options);
  if (id == "point-push") return std::make_unique<PointPush2D>(options);
  throw std::invalid_argument("make_env: unknown env id '" + id +
                              "' (expected point-reach or point-push)");
}

} // namespace hgr
