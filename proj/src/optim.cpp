#include "hgr/optim.hpp"

#include <cmath>
#include <stdexcept>

#include "hgr/kernels.hpp"

namespace hgr {

bool adam_step(std::vector<double>& params, const Gradients& grads,
               AdamState& state, double learning_rate) {
  if (grads.size() != params.size() ||
      state.first_moment.size() != params.size() ||
      state.second_moment.size() != params.size())
    throw std::invalid_argument("adam_step: shape mismatch");
  if (!(learning_rate > 0.0))
    throw std::invalid_argument("adam_step: learning rate must be positive");

  for (const double g : grads)
    if (!std::isfinite(g)) return false;

  state.step_count += 1;
  const double t = static_cast<double>(state.step_count);
  const double bc1 = 1.0 / (1.0 - std::pow(state.beta1, t));
  const double bc2 = 1.0 / (1.0 - std::pow(state.beta2, t));
  kernels::adam_update(params.data(), grads.data(), state.first_moment.data(),
                       state.second_moment.data(), params.size(),
                       learning_rate, state.beta1, state.beta2, state.eps_adam,
                       bc1, bc2);
  return true;
}

void polyak_update(MlpParams& target, const MlpParams& main, double coeff) {
  if (!target.congruent(main) || target.data.size() != main.data.size())
    throw std::invalid_argument("polyak_update: incongruent networks");
  if (!(coeff >= 0.0 && coeff <= 1.0))
    throw std::invalid_argument("polyak_update: coefficient outside [0,1]");
  kernels::lerp(target.data.data(), main.data.data(), coeff,
                target.data.size());
}

} // namespace hgr
