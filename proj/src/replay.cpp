#include "hgr/replay.hpp"

#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <utility>

#include "hgr/checkpoint.hpp"

namespace hgr {

Strategy strategy_from_string(const std::string& s) {
  if (s == "hgr") return Strategy::hgr;
  if (s == "uniform") return Strategy::uniform;
  if (s == "per") return Strategy::per;
  throw std::invalid_argument("unknown strategy '" + s +
                              "' (expected hgr, uniform, or per)");
}

const char* strategy_name(Strategy s) {
  switch (s) {
    case Strategy::hgr: return "hgr";
    case Strategy::uniform: return "uniform";
    case Strategy::per: return "per";
  }
  return "?";
}

std::size_t pair_count(std::size_t horizon) {
  return horizon * (horizon + 1) / 2;
}

std::size_t pair_index(std::size_t j, std::size_t i, std::size_t horizon) {
  if (j >= horizon || i <= j || i > horizon)
    throw std::invalid_argument("pair_index: need 0 <= j < i <= H");
  // Row j starts after the rows of experiences 0..j-1, which hold
  // H + (H-1) + ... + (H-j+1) = j*H - j(j-1)/2 pairs.
  return j * horizon - j * (j - 1) / 2 + (i - j - 1);
}

std::pair<std::size_t, std::size_t> pair_from_index(std::size_t flat,
                                                    std::size_t horizon) {
  if (flat >= pair_count(horizon))
    throw std::invalid_argument("pair_from_index: index out of range");
  std::size_t j = 0, row = horizon;
  while (flat >= row) {
    flat -= row;
    --row;
    ++j;
  }
  return {j, j + 1 + flat};
}

PairPriorityTable::PairPriorityTable(std::size_t horizon, double exponent)
    : horizon_(horizon), exponent_(exponent) {
  if (horizon == 0)
    throw std::invalid_argument("PairPriorityTable: zero horizon");
  raw_.assign(pair_count(horizon), 0.0);
  powered_.assign(raw_.size(), 0.0);
}

void PairPriorityTable::fill(double value) {
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("PairPriorityTable: priorities must be positive");
  const double pv = std::pow(value, exponent_);
  for (auto& v : raw_) v = value;
  for (auto& v : powered_) v = pv;
  cached_sum_ = value * static_cast<double>(K());
  powered_sum_ = pv * static_cast<double>(K());
  updates_since_recompute_ = 0;
}

void PairPriorityTable::set_entry(std::size_t flat, double value,
                                  double powered_value) {
  cached_sum_ += value - raw_[flat];
  powered_sum_ += powered_value - powered_[flat];
  raw_[flat] = value;
  powered_[flat] = powered_value;
  if (++updates_since_recompute_ >= 10000) recompute_sums();
}

void PairPriorityTable::update(std::size_t flat, double value) {
  if (flat >= raw_.size())
    throw std::invalid_argument("PairPriorityTable::update: index out of range");
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("PairPriorityTable: priorities must be positive");
  set_entry(flat, value, std::pow(value, exponent_));
}

void PairPriorityTable::update_row(std::size_t j, double value) {
  if (j >= horizon_)
    throw std::invalid_argument("PairPriorityTable::update_row: bad row");
  if (!(value > 0.0) || !std::isfinite(value))
    throw std::invalid_argument("PairPriorityTable: priorities must be positive");
  const double pv = std::pow(value, exponent_);
  for (std::size_t i = j + 1; i <= horizon_; ++i)
    set_entry(pair_index(j, i, horizon_), value, pv);
}

double PairPriorityTable::row_head_powered_sum() const {
  double s = 0.0;
  for (std::size_t j = 0; j < horizon_; ++j)
    s += powered_[pair_index(j, j + 1, horizon_)];
  return s;
}

void PairPriorityTable::recompute_sums() {
  double cs = 0.0, ps = 0.0;
  for (std::size_t k = 0; k < raw_.size(); ++k) {
    cs += raw_[k];
    ps += powered_[k];
  }
  cached_sum_ = cs;
  powered_sum_ = ps;
  updates_since_recompute_ = 0;
}

namespace {

double table_exponent_for(const BufferConfig& c) {
  switch (c.strategy) {
    case Strategy::hgr: return c.alpha_prime;
    case Strategy::uniform: return 0.0;
    case Strategy::per: return c.alpha;
  }
  return 0.0;
}

} // namespace

ReplayBuffer::ReplayBuffer(const BufferConfig& config)
    : config_(config),
      capacity_(config.buffer_size / config.horizon),
      table_exponent_(table_exponent_for(config)),
      tree_(config.buffer_size / config.horizon == 0
                ? 1
                : config.buffer_size / config.horizon) {
  if (config_.horizon == 0)
    throw std::invalid_argument("ReplayBuffer: zero horizon");
  if (capacity_ == 0)
    throw std::invalid_argument(
        "ReplayBuffer: buffer_size must hold at least one episode");
  if (!(config_.eps_prio > 0.0))
    throw std::invalid_argument("ReplayBuffer: eps_prio must be positive");
}

double ReplayBuffer::leaf_value(const PairPriorityTable& table) const {
  switch (config_.strategy) {
    case Strategy::hgr:
      return std::pow(table.mean() + config_.eps_prio, config_.alpha);
    case Strategy::uniform:
      return 1.0;
    case Strategy::per:
      return table.row_head_powered_sum();
  }
  return 1.0;
}

std::size_t ReplayBuffer::store_episode(EpisodeData episode,
                                        double max_priority) {
  const std::size_t H = config_.horizon;
  if (episode.transitions.size() != H)
    throw std::invalid_argument("store_episode: episode must have exactly H transitions");
  if (episode.achieved_goals.size() != H + 1)
    throw std::invalid_argument("store_episode: need H+1 achieved goals");
  if (!(max_priority > 0.0) || !std::isfinite(max_priority))
    throw std::invalid_argument("store_episode: invalid max_priority");

  std::size_t slot;
  if (episodes_.size() < capacity_) {
    slot = episodes_.size();
    episodes_.push_back(EpisodeRecord{});
  } else {
    slot = cursor_;
    tree_.set_leaf(slot, 0.0); // retire the evicted episode's mass first
  }
  cursor_ = (slot + 1) % capacity_;

  EpisodeRecord& rec = episodes_[slot];
  rec.data = std::move(episode);
  rec.pair_table = PairPriorityTable(H, table_exponent_);
  rec.pair_table.fill(max_priority);
  tree_.set_leaf(slot, leaf_value(rec.pair_table));
  return slot;
}

const EpisodeRecord& ReplayBuffer::episode(std::size_t slot) const {
  if (slot >= episodes_.size())
    throw std::invalid_argument("ReplayBuffer: bad episode slot");
  return episodes_[slot];
}

EpisodeRecord& ReplayBuffer::episode_mut(std::size_t slot) {
  if (slot >= episodes_.size())
    throw std::invalid_argument("ReplayBuffer: bad episode slot");
  return episodes_[slot];
}

PairView ReplayBuffer::get_pair(std::size_t slot, std::size_t j,
                                std::size_t i) const {
  const EpisodeRecord& rec = episode(slot);
  const std::size_t H = config_.horizon;
  if (j >= H || i <= j || i > H)
    throw std::invalid_argument("get_pair: need 0 <= j < i <= H");
  return PairView{&rec.data.transitions[j], rec.data.achieved_goals[i]};
}

void ReplayBuffer::refresh_leaf(std::size_t slot) {
  tree_.set_leaf(slot, leaf_value(episode(slot).pair_table));
}

void ReplayBuffer::observe_priority(double priority) {
  if (std::isfinite(priority) && priority > max_priority_)
    max_priority_ = priority;
}

void ReplayBuffer::save(std::ostream& os) const {
  io::write_tag(os, "BUF1");
  io::write_u64(os, config_.buffer_size);
  io::write_u64(os, config_.horizon);
  io::write_u64(os, static_cast<std::uint64_t>(config_.strategy));
  io::write_f64(os, config_.alpha);
  io::write_f64(os, config_.alpha_prime);
  io::write_f64(os, config_.eps_prio);
  io::write_u64(os, cursor_);
  io::write_f64(os, max_priority_);
  io::write_u64(os, episodes_.size());

  if (!episodes_.empty()) {
    const Transition& t0 = episodes_[0].data.transitions[0];
    io::write_u64(os, t0.state.size());
    io::write_u64(os, t0.action.size());
    io::write_u64(os, t0.episode_goal.size());
  }
  for (const EpisodeRecord& rec : episodes_) {
    for (const Transition& t : rec.data.transitions) {
      io::write_f64s(os, t.state.data(), t.state.size());
      io::write_f64s(os, t.action.data(), t.action.size());
      io::write_f64s(os, t.next_state.data(), t.next_state.size());
      io::write_f64s(os, t.episode_goal.data(), t.episode_goal.size());
    }
    for (const GoalValue& g : rec.data.achieved_goals)
      io::write_f64s(os, g.data(), g.size());
    io::write_f64s(os, rec.pair_table.raw_values().data(),
                   rec.pair_table.K());
  }
  const std::vector<double> leaves = tree_.leaves();
  io::write_u64(os, leaves.size());
  io::write_f64s(os, leaves.data(), leaves.size());
}

ReplayBuffer ReplayBuffer::load(std::istream& is) {
  io::expect_tag(is, "BUF1");
  BufferConfig cfg;
  cfg.buffer_size = io::read_u64(is);
  cfg.horizon = io::read_u64(is);
  const std::uint64_t strat = io::read_u64(is);
  if (strat > 2) throw std::runtime_error("buffer checkpoint: bad strategy");
  cfg.strategy = static_cast<Strategy>(strat);
  cfg.alpha = io::read_f64(is);
  cfg.alpha_prime = io::read_f64(is);
  cfg.eps_prio = io::read_f64(is);

  ReplayBuffer buf(cfg);
  buf.cursor_ = io::read_u64(is);
  buf.max_priority_ = io::read_f64(is);
  const std::uint64_t n = io::read_u64(is);
  if (n > buf.capacity_)
    throw std::runtime_error("buffer checkpoint: episode count exceeds capacity");

  std::size_t sd = 0, ad = 0, gd = 0;
  if (n > 0) {
    sd = io::read_u64(is);
    ad = io::read_u64(is);
    gd = io::read_u64(is);
    if (sd == 0 || sd > 1024 || ad == 0 || ad > 1024 || gd == 0 || gd > 1024)
      throw std::runtime_error("buffer checkpoint: implausible dimensions");
  }
  const std::size_t H = cfg.horizon;
  for (std::uint64_t e = 0; e < n; ++e) {
    EpisodeRecord rec;
    rec.data.transitions.resize(H);
    for (Transition& t : rec.data.transitions) {
      t.state.resize(sd);
      io::read_f64s(is, t.state.data(), sd);
      t.action.resize(ad);
      io::read_f64s(is, t.action.data(), ad);
      t.next_state.resize(sd);
      io::read_f64s(is, t.next_state.data(), sd);
      t.episode_goal.resize(gd);
      io::read_f64s(is, t.episode_goal.data(), gd);
    }
    rec.data.achieved_goals.resize(H + 1);
    for (GoalValue& g : rec.data.achieved_goals) {
      g.resize(gd);
      io::read_f64s(is, g.data(), gd);
    }
    rec.pair_table = PairPriorityTable(H, table_exponent_for(cfg));
    std::vector<double> raw(pair_count(H));
    io::read_f64s(is, raw.data(), raw.size());
    for (std::size_t k = 0; k < raw.size(); ++k)
      rec.pair_table.update(k, raw[k]);
    rec.pair_table.recompute_sums();
    buf.episodes_.push_back(std::move(rec));
  }

  const std::uint64_t nl = io::read_u64(is);
  std::vector<double> leaves(nl);
  io::read_f64s(is, leaves.data(), nl);
  buf.tree_ = SumTree::from_leaves(leaves);
  return buf;
}

} // namespace hgr
