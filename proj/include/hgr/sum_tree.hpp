#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace hgr {

// Fixed-capacity binary sum-tree for proportional sampling. Capacity is
// rounded up to a power of two; padding leaves stay at zero and are
// unreachable by sampling. Intervals are half-open: u exactly equal to a
// left-subtree sum descends right, and a zero-mass right child forces a left
// descent so zero leaves are never returned.
class SumTree {
public:
  explicit SumTree(std::size_t capacity_hint);

  std::size_t capacity() const { return capacity_; }
  std::size_t height() const { return height_; }
  double total() const { return nodes_[0]; }
  double leaf(std::size_t index) const;
  std::size_t live_leaves() const { return live_leaves_; }

  // value must be finite and >= 0; index < capacity. Performs exactly
  // height() internal-node updates plus one leaf write.
  void set_leaf(std::size_t index, double value);

  // Returns the unique leaf whose cumulative interval contains u. Requires
  // total() > 0 and 0 <= u < total().
  std::size_t sample_prefix(double u) const;

  // Complexity witnesses for the O(log n) contract.
  struct Stats {
    std::uint64_t set_calls = 0, sample_calls = 0;
    std::uint64_t node_writes = 0, node_reads = 0;
  };
  const Stats& stats() const { return stats_; }
  void reset_stats() { stats_ = Stats{}; }

  // Serialization surface: leaves only; internals are rebuilt.
  std::vector<double> leaves() const;
  static SumTree from_leaves(const std::vector<double>& leaf_values);

private:
  std::size_t capacity_ = 0; // power of two
  std::size_t height_ = 0;   // ceil(log2(capacity))
  std::size_t live_leaves_ = 0;
  std::vector<double> nodes_; // 2*capacity-1, leaf i at capacity-1+i
  mutable Stats stats_;
};

} // namespace hgr
