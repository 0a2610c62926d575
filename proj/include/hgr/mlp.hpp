#pragma once

#include <cstddef>
#include <vector>

#include "hgr/rng.hpp"

namespace hgr {

enum class OutputActivation { identity, tanh };

// Dense MLP parameters in one flat buffer laid out [W0 | b0 | W1 | b1 | ...],
// weights row-major (out x in). Hidden activation is always ReLU. The flat
// layout lets the optimizer, Polyak averaging, and checkpointing treat the
// whole network as a single vector.
struct MlpParams {
  std::vector<std::size_t> layer_sizes; // input, hidden..., output
  OutputActivation output_activation = OutputActivation::identity;
  std::vector<double> data;

  static MlpParams make(std::vector<std::size_t> sizes, OutputActivation act);

  std::size_t num_layers() const { return layer_sizes.size() - 1; }
  std::size_t rows(std::size_t l) const { return layer_sizes[l + 1]; }
  std::size_t cols(std::size_t l) const { return layer_sizes[l]; }
  std::size_t w_offset(std::size_t l) const { return w_off_[l]; }
  std::size_t b_offset(std::size_t l) const { return b_off_[l]; }
  double* W(std::size_t l) { return data.data() + w_off_[l]; }
  const double* W(std::size_t l) const { return data.data() + w_off_[l]; }
  double* b(std::size_t l) { return data.data() + b_off_[l]; }
  const double* b(std::size_t l) const { return data.data() + b_off_[l]; }
  std::size_t input_dim() const { return layer_sizes.front(); }
  std::size_t output_dim() const { return layer_sizes.back(); }
  std::size_t max_width() const;
  bool congruent(const MlpParams& other) const;

private:
  std::vector<std::size_t> w_off_, b_off_;
};

// Gradients share the flat layout of the MlpParams they differentiate.
using Gradients = std::vector<double>;

// Weights uniform in ±1/sqrt(fan_in), biases zero.
void init_uniform(MlpParams& p, Rng& rng);

// Per-layer activations kept around for the backward pass. act[0] is a copy
// of the input; pre[l] and act[l+1] belong to layer l. Buffers are reused
// across calls.
struct ForwardCache {
  std::vector<std::vector<double>> act;
  std::vector<std::vector<double>> pre;
  std::vector<double> scratch_a, scratch_b;
};

// Returns cache.act.back(). Throws std::invalid_argument on dimension
// mismatch.
const std::vector<double>& mlp_forward(const MlpParams& p, const double* x,
                                       std::size_t n, ForwardCache& cache);
const std::vector<double>& mlp_forward(const MlpParams& p,
                                       const std::vector<double>& x,
                                       ForwardCache& cache);

// Accumulates scale * d(output . out_grad)/dparams into grads (which must
// already have the right size; zero it for plain derivatives). If input_grad
// is non-null, writes scale * d/dinput there (overwrites, layer_sizes[0]
// entries). Throws std::invalid_argument when the cache does not match the
// params.
void mlp_backward(const MlpParams& p, ForwardCache& cache,
                  const double* out_grad, Gradients& grads, double scale = 1.0,
                  double* input_grad = nullptr);

} // namespace hgr
