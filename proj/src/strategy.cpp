#include "isaacs/strategy.hpp"

#include "isaacs/errors.hpp"

#include <cmath>

namespace isaacs {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

namespace {

std::uint64_t hash_all(std::initializer_list<std::uint64_t> parts) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (auto p : parts) h = mix64(h ^ p);
  return h;
}

}  // namespace

// ---------------------------------------------------------------------------
// MarkovStrategy

MarkovStrategy::MarkovStrategy(Side side_, SubGrid subgrid_, SpatialGrid grid_,
                               std::size_t own_actions_, std::size_t opponent_actions)
    : side(side_),
      subgrid(std::move(subgrid_)),
      grid(std::move(grid_)),
      own_actions(own_actions_),
      plain_table(Eigen::MatrixXi::Zero(subgrid.blocks(), grid.nodes())),
      counter_table(opponent_actions, Eigen::MatrixXi::Zero(subgrid.blocks(), grid.nodes())) {}

std::size_t MarkovStrategy::node_at_block_start(std::size_t k,
                                                std::span<const double> history) const {
  const std::size_t block = subgrid.block_of(k);
  return grid.nearest(history[subgrid.block_start(block)]);
}

std::size_t MarkovStrategy::plain(std::size_t k, std::span<const double> history) const {
  return plain_table(subgrid.block_of(k), node_at_block_start(k, history));
}

std::size_t MarkovStrategy::counter(std::size_t k, std::span<const double> history,
                                    std::size_t opponent) const {
  return counter_table[opponent](subgrid.block_of(k), node_at_block_start(k, history));
}

std::uint64_t MarkovStrategy::commitment(std::size_t block, std::size_t node) const {
  std::uint64_t id = 0;
  for (std::size_t j = counter_table.size(); j-- > 0;) {
    id = id * own_actions + static_cast<std::uint64_t>(counter_table[j](block, node));
  }
  return static_cast<std::uint64_t>(plain_table(block, node)) + own_actions * id;
}

std::uint64_t commitment_count(std::size_t own, std::size_t opponent) {
  std::uint64_t c = own;
  for (std::size_t j = 0; j < opponent; ++j) {
    if (c > (std::uint64_t{1} << 40)) return c;  // saturates; callers only compare to small caps
    c *= own;
  }
  return c;
}

void decode_commitment(std::uint64_t id, std::size_t own, std::size_t opponent,
                       std::size_t& plain, std::vector<std::size_t>& counter) {
  plain = static_cast<std::size_t>(id % own);
  id /= own;
  counter.resize(opponent);
  for (std::size_t j = 0; j < opponent; ++j) {
    counter[j] = static_cast<std::size_t>(id % own);
    id /= own;
  }
}

MarkovStrategy random_markov_strategy(Side side, const SubGrid& subgrid, const SpatialGrid& grid,
                                      std::size_t own_actions, std::size_t opponent_actions,
                                      std::uint64_t seed) {
  if (own_actions == 0) throw InvalidArgument("a player needs at least one action");
  MarkovStrategy s(side, subgrid, grid, own_actions, opponent_actions);
  for (std::size_t b = 0; b < subgrid.blocks(); ++b) {
    for (std::size_t n = 0; n < grid.nodes(); ++n) {
      s.plain_table(b, n) = static_cast<int>(hash_all({seed, b, n, 0xa11}) % own_actions);
      for (std::size_t j = 0; j < opponent_actions; ++j) {
        s.counter_table[j](b, n) = static_cast<int>(hash_all({seed, b, n, j, 0xc0}) % own_actions);
      }
    }
  }
  return s;
}

// ---------------------------------------------------------------------------
// RandomFeedbackStrategy

RandomFeedbackStrategy::RandomFeedbackStrategy(SpatialGrid grid, std::size_t own_actions,
                                               std::uint64_t seed)
    : grid_(std::move(grid)), own_(own_actions), seed_(seed) {
  if (own_ == 0) throw InvalidArgument("a player needs at least one action");
}

std::uint64_t RandomFeedbackStrategy::key(std::size_t k, std::span<const double> history) const {
  // Current node plus a coarse (8-cell) bucket of the previous grid-time state.
  const std::size_t now = grid_.nearest(history[k - 1]);
  const std::size_t before = k >= 2 ? grid_.nearest(history[k - 2]) * 8 / grid_.nodes() : 8;
  return hash_all({seed_, k, now, before});
}

std::size_t RandomFeedbackStrategy::plain(std::size_t k, std::span<const double> history) const {
  return static_cast<std::size_t>(mix64(key(k, history)) % own_);
}

std::size_t RandomFeedbackStrategy::counter(std::size_t k, std::span<const double> history,
                                            std::size_t opponent) const {
  return static_cast<std::size_t>(mix64(key(k, history) ^ (0x51ed + opponent)) % own_);
}

// ---------------------------------------------------------------------------
// PerturbedStrategy

PerturbedStrategy::PerturbedStrategy(std::shared_ptr<const Strategy> base, SpatialGrid grid,
                                     std::size_t own_actions, double rate, std::uint64_t seed)
    : base_(std::move(base)), grid_(std::move(grid)), own_(own_actions), rate_(rate), seed_(seed) {
  if (!(rate >= 0.0 && rate <= 1.0)) throw InvalidArgument("perturbation rate must lie in [0, 1]");
}

std::size_t PerturbedStrategy::maybe_flip(std::size_t base, std::size_t k,
                                          std::span<const double> history,
                                          std::uint64_t salt) const {
  const std::uint64_t h = hash_all({seed_, k, grid_.nearest(history[k - 1]), salt});
  if (unit_interval(h) < rate_) return static_cast<std::size_t>(mix64(h) % own_);
  return base;
}

std::size_t PerturbedStrategy::plain(std::size_t k, std::span<const double> history) const {
  return maybe_flip(base_->plain(k, history), k, history, 0x9a);
}

std::size_t PerturbedStrategy::counter(std::size_t k, std::span<const double> history,
                                       std::size_t opponent) const {
  return maybe_flip(base_->counter(k, history, opponent), k, history, 0xc0 + opponent);
}

}  // namespace isaacs
