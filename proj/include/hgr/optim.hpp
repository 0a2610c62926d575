#pragma once

#include <cstdint>
#include <vector>

#include "hgr/mlp.hpp"

namespace hgr {

struct AdamState {
  std::vector<double> first_moment, second_moment;
  std::uint64_t step_count = 0;
  double beta1 = 0.9, beta2 = 0.999, eps_adam = 1e-8;

  static AdamState make(std::size_t n) {
    AdamState s;
    s.first_moment.assign(n, 0.0);
    s.second_moment.assign(n, 0.0);
    return s;
  }
};

// Bias-corrected Adam step on the flat parameter vector. Returns false and
// leaves params and state completely untouched if any gradient entry is
// non-finite. Throws std::invalid_argument on shape mismatch or lr <= 0.
bool adam_step(std::vector<double>& params, const Gradients& grads,
               AdamState& state, double learning_rate);

// target <- coeff * target + (1 - coeff) * main, elementwise. Throws
// std::invalid_argument on incongruent shapes or coeff outside [0, 1].
void polyak_update(MlpParams& target, const MlpParams& main, double coeff);

} // namespace hgr
