#include "hgr/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <stdexcept>

#include "hgr/kernels.hpp"

namespace hgr {

namespace k = kernels;

MlpParams MlpParams::make(std::vector<std::size_t> sizes,
                          OutputActivation act) {
  if (sizes.size() < 2)
    throw std::invalid_argument("MlpParams: need at least input and output layer");
  for (const std::size_t s : sizes)
    if (s == 0) throw std::invalid_argument("MlpParams: zero-width layer");

  MlpParams p;
  p.layer_sizes = std::move(sizes);
  p.output_activation = act;
  const std::size_t L = p.num_layers();
  p.w_off_.resize(L);
  p.b_off_.resize(L);
  std::size_t off = 0;
  for (std::size_t l = 0; l < L; ++l) {
    p.w_off_[l] = off;
    off += p.rows(l) * p.cols(l);
    p.b_off_[l] = off;
    off += p.rows(l);
  }
  p.data.assign(off, 0.0);
  return p;
}

std::size_t MlpParams::max_width() const {
  return *std::max_element(layer_sizes.begin(), layer_sizes.end());
}

bool MlpParams::congruent(const MlpParams& other) const {
  return layer_sizes == other.layer_sizes &&
         output_activation == other.output_activation;
}

void init_uniform(MlpParams& p, Rng& rng) {
  const std::size_t L = p.num_layers();
  for (std::size_t l = 0; l < L; ++l) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(p.cols(l)));
    double* w = p.W(l);
    const std::size_t n = p.rows(l) * p.cols(l);
    for (std::size_t i = 0; i < n; ++i) w[i] = rng.uniform(-bound, bound);
    std::fill_n(p.b(l), p.rows(l), 0.0);
  }
}

const std::vector<double>& mlp_forward(const MlpParams& p, const double* x,
                                       std::size_t n, ForwardCache& cache) {
  if (n != p.input_dim())
    throw std::invalid_argument("mlp_forward: input dimension mismatch");

  const std::size_t L = p.num_layers();
  cache.act.resize(L + 1);
  cache.pre.resize(L);
  cache.act[0].assign(x, x + n);

  for (std::size_t l = 0; l < L; ++l) {
    const std::size_t r = p.rows(l), c = p.cols(l);
    cache.pre[l].resize(r);
    cache.act[l + 1].resize(r);
    k::matvec_bias(p.W(l), cache.act[l].data(), p.b(l), cache.pre[l].data(), r, c);
    if (l + 1 < L) {
      k::relu(cache.pre[l].data(), cache.act[l + 1].data(), r);
    } else if (p.output_activation == OutputActivation::tanh) {
      for (std::size_t i = 0; i < r; ++i)
        cache.act[l + 1][i] = std::tanh(cache.pre[l][i]);
    } else {
      cache.act[l + 1] = cache.pre[l];
    }
  }
  return cache.act.back();
}

const std::vector<double>& mlp_forward(const MlpParams& p,
                                       const std::vector<double>& x,
                                       ForwardCache& cache) {
  return mlp_forward(p, x.data(), x.size(), cache);
}

namespace {

bool cache_matches(const MlpParams& p, const ForwardCache& c) {
  const std::size_t L = p.num_layers();
  if (c.act.size() != L + 1 || c.pre.size() != L) return false;
  for (std::size_t l = 0; l <= L; ++l)
    if (c.act[l].size() != p.layer_sizes[l]) return false;
  for (std::size_t l = 0; l < L; ++l)
    if (c.pre[l].size() != p.rows(l)) return false;
  return true;
}

} // namespace

void mlp_backward(const MlpParams& p, ForwardCache& cache,
                  const double* out_grad, Gradients& grads, double scale,
                  double* input_grad) {
  if (!cache_matches(p, cache))
    throw std::invalid_argument("mlp_backward: cache does not match params");
  if (grads.size() != p.data.size())
    throw std::invalid_argument("mlp_backward: gradient buffer size mismatch");

  const std::size_t L = p.num_layers();
  const std::size_t width = p.max_width();
  cache.scratch_a.resize(width);
  cache.scratch_b.resize(width);
  double* delta = cache.scratch_a.data();
  double* next = cache.scratch_b.data();

  // delta := d/d pre[L-1]
  const std::size_t out_n = p.output_dim();
  if (p.output_activation == OutputActivation::tanh) {
    const std::vector<double>& y = cache.act[L];
    for (std::size_t i = 0; i < out_n; ++i)
      delta[i] = scale * out_grad[i] * (1.0 - y[i] * y[i]);
  } else {
    for (std::size_t i = 0; i < out_n; ++i) delta[i] = scale * out_grad[i];
  }

  for (std::size_t l = L; l-- > 0;) {
    const std::size_t r = p.rows(l), c = p.cols(l);
    k::outer_acc(grads.data() + p.w_offset(l), delta, cache.act[l].data(), r, c);
    k::axpy(1.0, delta, grads.data() + p.b_offset(l), r);
    if (l == 0 && input_grad == nullptr) break;
    std::fill_n(next, c, 0.0);
    k::matvec_t_acc(p.W(l), delta, next, r, c);
    if (l == 0) {
      std::memcpy(input_grad, next, c * sizeof(double));
      break;
    }
    k::relu_backward(cache.pre[l - 1].data(), next, c);
    std::swap(delta, next);
  }
}

} // namespace hgr
