#include "hgr/sum_tree.hpp"

#include <cmath>
#include <stdexcept>

namespace hgr {

SumTree::SumTree(std::size_t capacity_hint) {
  if (capacity_hint == 0)
    throw std::invalid_argument("SumTree: capacity must be positive");
  capacity_ = 1;
  height_ = 0;
  while (capacity_ < capacity_hint) {
    capacity_ <<= 1;
    ++height_;
  }
  nodes_.assign(2 * capacity_ - 1, 0.0);
}

double SumTree::leaf(std::size_t index) const {
  if (index >= capacity_)
    throw std::invalid_argument("SumTree::leaf: index out of range");
  return nodes_[capacity_ - 1 + index];
}

void SumTree::set_leaf(std::size_t index, double value) {
  if (index >= capacity_)
    throw std::invalid_argument("SumTree::set_leaf: index out of range");
  if (!(value >= 0.0) || !std::isfinite(value))
    throw std::invalid_argument(
        "SumTree::set_leaf: value must be finite and nonnegative");

  std::size_t k = capacity_ - 1 + index;
  const double old = nodes_[k];
  if (old == 0.0 && value > 0.0) ++live_leaves_;
  if (old > 0.0 && value == 0.0) --live_leaves_;
  nodes_[k] = value;
  ++stats_.set_calls;
  ++stats_.node_writes;
  while (k != 0) {
    k = (k - 1) / 2;
    // Recompute from children rather than applying a delta: keeps every
    // parent exactly equal to left+right in double arithmetic.
    nodes_[k] = nodes_[2 * k + 1] + nodes_[2 * k + 2];
    ++stats_.node_writes;
    stats_.node_reads += 2;
  }
}

std::size_t SumTree::sample_prefix(double u) const {
  const double t = total();
  if (!(t > 0.0))
    throw std::invalid_argument("SumTree::sample_prefix: empty tree");
  if (!(u >= 0.0) || !(u < t))
    throw std::invalid_argument("SumTree::sample_prefix: u outside [0,total)");

  ++stats_.sample_calls;
  std::size_t k = 0;
  while (k < capacity_ - 1) {
    const double left = nodes_[2 * k + 1];
    const double right = nodes_[2 * k + 2];
    stats_.node_reads += 2;
    if (u < left || right == 0.0) {
      k = 2 * k + 1;
    } else {
      u -= left;
      k = 2 * k + 2;
    }
  }
  return k - (capacity_ - 1);
}

std::vector<double> SumTree::leaves() const {
  return std::vector<double>(nodes_.begin() + (capacity_ - 1), nodes_.end());
}

SumTree SumTree::from_leaves(const std::vector<double>& leaf_values) {
  if (leaf_values.empty())
    throw std::invalid_argument("SumTree::from_leaves: empty leaf array");
  SumTree t(leaf_values.size());
  for (std::size_t i = 0; i < leaf_values.size(); ++i) {
    const double v = leaf_values[i];
    if (!(v >= 0.0) || !std::isfinite(v))
      throw std::invalid_argument("SumTree::from_leaves: invalid leaf value");
    t.nodes_[t.capacity_ - 1 + i] = v;
    if (v > 0.0) ++t.live_leaves_;
  }
  for (std::size_t k = t.capacity_ - 1; k-- > 0;)
    t.nodes_[k] = t.nodes_[2 * k + 1] + t.nodes_[2 * k + 2];
  return t;
}

} // namespace hgr
