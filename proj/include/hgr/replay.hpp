#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hgr/env.hpp"
#include "hgr/sum_tree.hpp"

namespace hgr {

enum class Strategy { hgr, uniform, per };

Strategy strategy_from_string(const std::string& s);
const char* strategy_name(Strategy s);

// One environment step. Rewards are never stored; replay recomputes them
// against the sampled hindsight goal.
struct Transition {
  std::vector<double> state, action, next_state;
  GoalValue episode_goal;
};

// Flat index for the (experience j, future state i) pair, j in [0,H),
// i in (j,H], enumerated row by row: (0,1),(0,2),...,(0,H),(1,2),...
std::size_t pair_count(std::size_t horizon); // K = H(H+1)/2
std::size_t pair_index(std::size_t j, std::size_t i, std::size_t horizon);
std::pair<std::size_t, std::size_t> pair_from_index(std::size_t flat,
                                                    std::size_t horizon);

// Priorities for all K pairs of one episode. Values are stored raw (the
// sampling exponent is applied in a parallel powered cache so draws cost a
// prefix scan, not K pow calls). Both running sums are recomputed exactly
// every 1e4 entry updates to bound drift.
class PairPriorityTable {
public:
  PairPriorityTable() = default;
  PairPriorityTable(std::size_t horizon, double exponent);

  std::size_t horizon() const { return horizon_; }
  std::size_t K() const { return raw_.size(); }
  double exponent() const { return exponent_; }
  double raw(std::size_t flat) const { return raw_.at(flat); }
  double powered(std::size_t flat) const { return powered_.at(flat); }
  const std::vector<double>& raw_values() const { return raw_; }
  const std::vector<double>& powered_values() const { return powered_; }
  double cached_sum() const { return cached_sum_; }
  double powered_sum() const { return powered_sum_; }
  double mean() const { return cached_sum_ / static_cast<double>(K()); }

  void fill(double value);
  void update(std::size_t flat, double value);
  // Sets every pair (j, i) of experience j to the same value; used by the
  // one-step PER baseline, which tracks per-transition priorities.
  void update_row(std::size_t j, double value);
  // Sum over experiences j of powered[(j, j+1)] — the PER episode mass.
  double row_head_powered_sum() const;
  void recompute_sums();

private:
  void set_entry(std::size_t flat, double value, double powered_value);

  std::size_t horizon_ = 0;
  double exponent_ = 1.0;
  std::vector<double> raw_, powered_;
  double cached_sum_ = 0.0, powered_sum_ = 0.0;
  std::uint64_t updates_since_recompute_ = 0;
};

// Rollout product: H transitions and the H+1 achieved goals of the visited
// states s_0..s_H.
struct EpisodeData {
  std::vector<Transition> transitions;
  std::vector<GoalValue> achieved_goals;
};

struct EpisodeRecord {
  EpisodeData data;
  PairPriorityTable pair_table;
};

struct BufferConfig {
  std::size_t buffer_size = 1000000; // in transitions
  std::size_t horizon = 30;
  Strategy strategy = Strategy::hgr;
  double alpha = 0.6;       // episode-level exponent
  double alpha_prime = 0.6; // goal-level exponent
  double eps_prio = 1e-6;
};

struct PairView {
  const Transition* transition;
  GoalValue hindsight_goal;
};

// Episode-structured ring buffer with a sum-tree over episode priorities.
// Capacity is floor(buffer_size / horizon) episodes; storing into a full
// buffer evicts the oldest episode (its leaf is zeroed before reuse).
class ReplayBuffer {
public:
  explicit ReplayBuffer(const BufferConfig& config);

  const BufferConfig& config() const { return config_; }
  std::size_t capacity_episodes() const { return capacity_; }
  std::size_t size() const { return episodes_.size(); }
  std::size_t horizon() const { return config_.horizon; }
  std::size_t live_transitions() const { return size() * config_.horizon; }

  // All pair priorities start at max_priority; the episode's sum-tree leaf is
  // installed per the buffer's strategy. Returns the slot id.
  std::size_t store_episode(EpisodeData episode, double max_priority);

  const EpisodeRecord& episode(std::size_t slot) const;
  EpisodeRecord& episode_mut(std::size_t slot);
  PairView get_pair(std::size_t slot, std::size_t j, std::size_t i) const;

  const SumTree& tree() const { return tree_; }
  // Recomputes and installs the episode's leaf from its pair table.
  void refresh_leaf(std::size_t slot);
  // Leaf formula per strategy: hgr (mean + eps)^alpha; uniform 1; per
  // sum over transitions of powered row values.
  double leaf_value(const PairPriorityTable& table) const;

  // Running max of observed pair priorities (|delta| + eps), used to store
  // new episodes "with maximal priority". Starts at 1.0.
  double max_priority() const { return max_priority_; }
  void observe_priority(double priority);

  void save(std::ostream& os) const;
  static ReplayBuffer load(std::istream& is);

private:
  BufferConfig config_;
  std::size_t capacity_ = 0;
  std::size_t cursor_ = 0;
  double max_priority_ = 1.0;
  double table_exponent_ = 0.0;
  std::vector<EpisodeRecord> episodes_;
  SumTree tree_;
};

} // namespace hgr
