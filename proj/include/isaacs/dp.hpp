#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "isaacs/lattice.hpp"
#include "isaacs/pde.hpp"
#include "isaacs/problem.hpp"
#include "isaacs/schedule.hpp"
#include "isaacs/strategy.hpp"

namespace isaacs {

/// Who sees whom on each interval: either fixed marks or a coin with
/// probability p(t_{k-1}, X_{t_{k-1}}) of "v sees u".
class PriorityRule {
 public:
  static PriorityRule coin(PrioritySpec priority);
  static PriorityRule scheduled(MarkSequence marks);

  bool is_random() const { return random_; }
  const PrioritySpec& priority() const { return priority_; }
  const MarkSequence& marks() const { return marks_; }

  // Weight of the "v sees u" branch on interval k (1-based) from state x.
  double weight(std::size_t k, double t_prev, double x) const {
    return random_ ? priority_(t_prev, x) : static_cast<double>(marks_.marks[k - 1]);
  }

 private:
  bool random_ = true;
  PrioritySpec priority_;
  MarkSequence marks_;
};

struct GameValueTables {
  // Per-step backward induction W on the partition times.
  ValueField value;
  // Values over Markov strategies that commit once per sub-grid block:
  // sup over u commitments of the v-optimal response, and its mirror.
  ValueField v_minus;
  ValueField v_plus;
  MarkovStrategy strategy_u;
  MarkovStrategy strategy_v;
  std::size_t clamped_successors = 0;
};

// Commitment enumeration cap per block (|U| |U|^|V| and |V| |V|^|U|).
inline constexpr std::uint64_t kMaxCommitments = 4096;

/// Fixed marks. Blocks of one interval use the local saddle directly; longer
/// blocks enumerate the committing player's (plain, counter-map) pairs while
/// the other player re-solves every step. Throws InvalidArgument when the
/// priority is not time-only, marks or sub-grid do not fit the partition, or
/// a block would need more than kMaxCommitments candidates.
GameValueTables dp_value_deterministic(const ProblemSpec& spec, const Partition& partition,
                                       const MarkSequence& marks, const SubGrid& subgrid,
                                       const TransitionModel& lattice);

/// Coin priority: value = p lower + (1 - p) upper at every node and step;
/// V_minus = V_plus = value. Strategies change every interval.
GameValueTables dp_value_random(const ProblemSpec& spec, const Partition& partition,
                                const TransitionModel& lattice);

/// Lattice best response to a fixed Markov strategy. The responder reacts to
/// the commitment the fixed player made at the current block start, so its
/// rule reads the state at the block start and at t_{k-1}.
class BestResponse final : public Strategy {
 public:
  Side side() const { return side_; }
  // Responder's lattice value at the sub-grid times.
  const ValueField& value() const { return value_; }

  std::size_t plain(std::size_t k, std::span<const double> history) const override;
  std::size_t counter(std::size_t k, std::span<const double> history,
                      std::size_t opponent) const override;

 private:
  friend BestResponse best_response(const ProblemSpec&, const TransitionModel&,
                                    const PriorityRule&, const MarkovStrategy&);
  BestResponse(Side side, SubGrid subgrid, ValueField value);

  struct Policy {
    Eigen::MatrixXi plain;                 // steps in block x nodes
    std::vector<Eigen::MatrixXi> counter;  // per opponent action
  };
  struct Block {
    std::vector<int> policy_of_node;  // block-start node -> policy index
    std::vector<Policy> policies;
  };
  const Policy& policy(std::size_t k, std::span<const double> history, std::size_t& row,
                       std::size_t& node) const;

  Side side_;
  SubGrid subgrid_;
  ValueField value_;
  std::vector<Block> blocks_;
};

BestResponse best_response(const ProblemSpec& spec, const TransitionModel& lattice,
                           const PriorityRule& rule, const MarkovStrategy& fixed);

}  // namespace isaacs
