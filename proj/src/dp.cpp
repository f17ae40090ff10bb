#include "isaacs/dp.hpp"

#include "isaacs/errors.hpp"
#include "isaacs/static_game.hpp"

#include <cmath>
#include <limits>
#include <unordered_map>

namespace isaacs {

PriorityRule PriorityRule::coin(PrioritySpec priority) {
  PriorityRule r;
  r.random_ = true;
  r.priority_ = std::move(priority);
  return r;
}

PriorityRule PriorityRule::scheduled(MarkSequence marks) {
  for (int m : marks.marks) {
    if (m != 0 && m != 1) throw InvalidArgument("marks must be 0 or 1");
  }
  PriorityRule r;
  r.random_ = false;
  r.marks_ = std::move(marks);
  return r;
}

namespace {

struct Commitment {
  std::size_t plain = 0;
  std::vector<std::size_t> counter;
};

void require_aligned(const Partition& partition, const TransitionModel& lattice) {
  const auto& a = partition.times();
  const auto& b = lattice.partition().times();
  if (a.size() != b.size() || !((a - b).cwiseAbs().array() <= 1e-12).all()) {
    throw InvalidArgument("lattice was built on a different partition");
  }
}

ValueField make_field(const Eigen::VectorXd& times, const SpatialGrid& grid) {
  return {times, grid, RowMatrixXd::Zero(times.size(), grid.nodes())};
}

void fill_terminal(const ProblemSpec& spec, const SpatialGrid& grid, RowMatrixXd& values,
                   Eigen::Index row) {
  for (std::size_t n = 0; n < grid.nodes(); ++n) values(row, n) = spec.payoff()(grid.node(n));
  if (!values.row(row).allFinite()) throw NumericalError("terminal payoff is not finite on the grid");
}

std::span<const double> row_span(const RowMatrixXd& m, Eigen::Index r) {
  return {m.data() + r * m.cols(), static_cast<std::size_t>(m.cols())};
}

void local_game(const TransitionModel& lattice, std::size_t k, std::size_t node,
                std::span<const double> cont, Eigen::MatrixXd& f) {
  for (std::size_t i = 0; i < lattice.u_count(); ++i) {
    for (std::size_t j = 0; j < lattice.v_count(); ++j) {
      f(i, j) = lattice.expectation(k, node, i, j, cont);
    }
  }
}

double combine(double weight, double lower, double upper) {
  if (weight == 1.0) return lower;
  if (weight == 0.0) return upper;
  return weight * lower + (1.0 - weight) * upper;
}

// Interval k: out(node) from the continuation at t_k. Saddle commitments go
// into `block` of su / sv when given.
void saddle_step(const TransitionModel& lattice, const PriorityRule& rule, std::size_t k,
                 std::span<const double> cont, std::span<double> out, MarkovStrategy* su,
                 MarkovStrategy* sv, std::size_t block) {
  const SpatialGrid& grid = lattice.grid();
  const double t = lattice.partition().times()(k - 1);
  Eigen::MatrixXd f(lattice.u_count(), lattice.v_count());
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    local_game(lattice, k, node, cont, f);
    const double w = rule.weight(k, t, grid.node(node));
    if (su == nullptr && sv == nullptr) {
      out[node] = combine(w, lower_value_only(f), upper_value_only(f));
      continue;
    }
    const auto lo = lower_value(f);
    const auto up = upper_value(f);
    out[node] = combine(w, lo.value, up.value);
    if (su != nullptr) {
      su->plain_table(block, node) = static_cast<int>(lo.u_star);
      for (std::size_t j = 0; j < up.alpha_star.size(); ++j) {
        su->counter_table[j](block, node) = static_cast<int>(up.alpha_star[j]);
      }
    }
    if (sv != nullptr) {
      sv->plain_table(block, node) = static_cast<int>(up.v_star);
      for (std::size_t i = 0; i < lo.beta_star.size(); ++i) {
        sv->counter_table[i](block, node) = static_cast<int>(lo.beta_star[i]);
      }
    }
  }
  for (double x : out) {
    if (!std::isfinite(x)) throw NumericalError("non-finite DP value");
  }
}

// Interval k with `fixed` holding commitment c; the other player answers
// optimally. Policy row `row` is written when the tables are given.
void respond_step(const TransitionModel& lattice, const PriorityRule& rule, std::size_t k,
                  Side fixed, const Commitment& c, std::span<const double> cont,
                  std::span<double> out, Eigen::MatrixXi* plain,
                  std::vector<Eigen::MatrixXi>* counter, Eigen::Index row) {
  const SpatialGrid& grid = lattice.grid();
  const double t = lattice.partition().times()(k - 1);
  const Eigen::Index nu = static_cast<Eigen::Index>(lattice.u_count());
  const Eigen::Index nv = static_cast<Eigen::Index>(lattice.v_count());
  Eigen::MatrixXd f(nu, nv);
  for (std::size_t node = 0; node < grid.nodes(); ++node) {
    local_game(lattice, k, node, cont, f);
    const double w = rule.weight(k, t, grid.node(node));
    double heads;
    double tails;
    if (fixed == Side::kU) {
      // v answers a with its best reply; when v leads it picks the column
      // where alpha hurts u least.
      Eigen::Index reply_to_plain = 0;
      for (Eigen::Index i = 0; i < nu; ++i) {
        Eigen::Index best = 0;
        for (Eigen::Index j = 1; j < nv; ++j) {
          if (f(i, j) < f(i, best)) best = j;
        }
        if (counter != nullptr) (*counter)[i](row, node) = static_cast<int>(best);
        if (i == static_cast<Eigen::Index>(c.plain)) reply_to_plain = best;
      }
      heads = f(c.plain, reply_to_plain);
      Eigen::Index lead = 0;
      for (Eigen::Index j = 1; j < nv; ++j) {
        if (f(c.counter[j], j) < f(c.counter[lead], lead)) lead = j;
      }
      tails = f(c.counter[lead], lead);
      if (plain != nullptr) (*plain)(row, node) = static_cast<int>(lead);
    } else {
      Eigen::Index lead = 0;
      for (Eigen::Index i = 1; i < nu; ++i) {
        if (f(i, c.counter[i]) > f(lead, c.counter[lead])) lead = i;
      }
      heads = f(lead, c.counter[lead]);
      Eigen::Index reply_to_plain = 0;
      for (Eigen::Index j = 0; j < nv; ++j) {
        Eigen::Index best = 0;
        for (Eigen::Index i = 1; i < nu; ++i) {
          if (f(i, j) > f(best, j)) best = i;
        }
        if (counter != nullptr) (*counter)[j](row, node) = static_cast<int>(best);
        if (j == static_cast<Eigen::Index>(c.plain)) reply_to_plain = best;
      }
      tails = f(reply_to_plain, c.plain);
      if (plain != nullptr) (*plain)(row, node) = static_cast<int>(lead);
    }
    out[node] = combine(w, heads, tails);
  }
  for (double x : out) {
    if (!std::isfinite(x)) throw NumericalError("non-finite DP value");
  }
}

Commitment decode(std::uint64_t id, std::size_t own, std::size_t opponent) {
  Commitment c;
  decode_commitment(id, own, opponent, c.plain, c.counter);
  return c;
}

void record(MarkovStrategy& s, std::size_t block, std::size_t node, const Commitment& c) {
  s.plain_table(block, node) = static_cast<int>(c.plain);
  for (std::size_t j = 0; j < c.counter.size(); ++j) {
    s.counter_table[j](block, node) = static_cast<int>(c.counter[j]);
  }
}

// V_minus (fixed = u, maximize) or V_plus (fixed = v, minimize) over one
// block of two or more intervals.
void committed_block(const TransitionModel& lattice, const PriorityRule& rule, Side fixed,
                     std::size_t begin, std::size_t end, RowMatrixXd& values,
                     MarkovStrategy& strategy, std::size_t block) {
  const std::size_t nodes = lattice.grid().nodes();
  const std::size_t own = fixed == Side::kU ? lattice.u_count() : lattice.v_count();
  const std::size_t opp = fixed == Side::kU ? lattice.v_count() : lattice.u_count();
  const std::uint64_t count = commitment_count(own, opp);
  if (count > kMaxCommitments) {
    throw InvalidArgument("too many Markov commitments to enumerate per block (" +
                          std::to_string(count) + ")");
  }
  const bool maximize = fixed == Side::kU;
  const double worst = maximize ? -std::numeric_limits<double>::infinity()
                                : std::numeric_limits<double>::infinity();
  for (std::size_t k = begin; k < end; ++k) values.row(k).setConstant(worst);
  std::vector<std::uint64_t> best_id(nodes, 0);

  Eigen::VectorXd j_cur(nodes);
  Eigen::VectorXd j_next(nodes);
  for (std::uint64_t id = 0; id < count; ++id) {
    const Commitment c = decode(id, own, opp);
    std::span<const double> cont = row_span(values, end);
    for (std::size_t k = end; k > begin; --k) {
      respond_step(lattice, rule, k, fixed, c, cont, {j_cur.data(), nodes}, nullptr, nullptr, 0);
      for (std::size_t n = 0; n < nodes; ++n) {
        const double v = j_cur(n);
        double& slot = values(k - 1, n);
        if (maximize ? v > slot : v < slot) {
          slot = v;
          if (k - 1 == begin) best_id[n] = id;
        }
      }
      j_next.swap(j_cur);
      cont = {j_next.data(), nodes};
    }
  }
  for (std::size_t n = 0; n < nodes; ++n) record(strategy, block, n, decode(best_id[n], own, opp));
}

}  // namespace

GameValueTables dp_value_random(const ProblemSpec& spec, const Partition& partition,
                                const TransitionModel& lattice) {
  require_aligned(partition, lattice);
  const SpatialGrid& grid = lattice.grid();
  const std::size_t n = partition.intervals();
  const PriorityRule rule = PriorityRule::coin(spec.priority());
  const SubGrid every = SubGrid::trivial(n);

  GameValueTables out{make_field(partition.times(), grid),
                      make_field(partition.times(), grid),
                      make_field(partition.times(), grid),
                      MarkovStrategy(Side::kU, every, grid, lattice.u_count(), lattice.v_count()),
                      MarkovStrategy(Side::kV, every, grid, lattice.v_count(), lattice.u_count()),
                      lattice.clamped()};
  RowMatrixXd& w = out.value.values;
  fill_terminal(spec, grid, w, n);
  for (std::size_t k = n; k >= 1; --k) {
    saddle_step(lattice, rule, k, row_span(w, k), {w.data() + (k - 1) * grid.nodes(), grid.nodes()},
                &out.strategy_u, &out.strategy_v, k - 1);
  }
  out.v_minus.values = w;
  out.v_plus.values = w;
  return out;
}

GameValueTables dp_value_deterministic(const ProblemSpec& spec, const Partition& partition,
                                       const MarkSequence& marks, const SubGrid& subgrid,
                                       const TransitionModel& lattice) {
  if (!spec.priority().time_only()) {
    throw InvalidArgument("deterministic marks need a time-only priority");
  }
  require_aligned(partition, lattice);
  const std::size_t n = partition.intervals();
  if (marks.marks.size() != n) throw InvalidArgument("mark count does not match the partition");
  if (subgrid.indices().back() != n) throw InvalidArgument("sub-grid does not end at t_n");
  const PriorityRule rule = PriorityRule::scheduled(marks);
  const SpatialGrid& grid = lattice.grid();
  const std::size_t nodes = grid.nodes();

  GameValueTables out{make_field(partition.times(), grid),
                      make_field(partition.times(), grid),
                      make_field(partition.times(), grid),
                      MarkovStrategy(Side::kU, subgrid, grid, lattice.u_count(), lattice.v_count()),
                      MarkovStrategy(Side::kV, subgrid, grid, lattice.v_count(), lattice.u_count()),
                      lattice.clamped()};

  RowMatrixXd& w = out.value.values;
  fill_terminal(spec, grid, w, n);
  for (std::size_t k = n; k >= 1; --k) {
    saddle_step(lattice, rule, k, row_span(w, k), {w.data() + (k - 1) * nodes, nodes}, nullptr,
                nullptr, 0);
  }

  RowMatrixXd& lo = out.v_minus.values;
  RowMatrixXd& up = out.v_plus.values;
  lo.row(n) = w.row(n);
  up.row(n) = w.row(n);
  for (std::size_t i = subgrid.blocks(); i-- > 0;) {
    const std::size_t begin = subgrid.block_start(i);
    const std::size_t end = subgrid.block_end(i);
    if (end - begin == 1) {
      saddle_step(lattice, rule, end, row_span(lo, end), {lo.data() + begin * nodes, nodes},
                  &out.strategy_u, nullptr, i);
      saddle_step(lattice, rule, end, row_span(up, end), {up.data() + begin * nodes, nodes},
                  nullptr, &out.strategy_v, i);
    } else {
      committed_block(lattice, rule, Side::kU, begin, end, lo, out.strategy_u, i);
      committed_block(lattice, rule, Side::kV, begin, end, up, out.strategy_v, i);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Best response

BestResponse::BestResponse(Side side, SubGrid subgrid, ValueField value)
    : side_(side), subgrid_(std::move(subgrid)), value_(std::move(value)) {}

const BestResponse::Policy& BestResponse::policy(std::size_t k, std::span<const double> history,
                                                 std::size_t& row, std::size_t& node) const {
  const std::size_t block = subgrid_.block_of(k);
  const std::size_t begin = subgrid_.block_start(block);
  const Block& b = blocks_[block];
  const std::size_t start_node = value_.grid.nearest(history[begin]);
  row = k - begin - 1;
  node = value_.grid.nearest(history[k - 1]);
  return b.policies[b.policy_of_node[start_node]];
}

std::size_t BestResponse::plain(std::size_t k, std::span<const double> history) const {
  std::size_t row;
  std::size_t node;
  const Policy& p = policy(k, history, row, node);
  return p.plain(row, node);
}

std::size_t BestResponse::counter(std::size_t k, std::span<const double> history,
                                  std::size_t opponent) const {
  std::size_t row;
  std::size_t node;
  const Policy& p = policy(k, history, row, node);
  return p.counter[opponent](row, node);
}

BestResponse best_response(const ProblemSpec& spec, const TransitionModel& lattice,
                           const PriorityRule& rule, const MarkovStrategy& fixed) {
  const SpatialGrid& grid = lattice.grid();
  const std::size_t nodes = grid.nodes();
  const std::size_t n = lattice.partition().intervals();
  if (fixed.grid.nodes() != nodes || fixed.grid.lower() != grid.lower() ||
      fixed.grid.upper() != grid.upper()) {
    throw InvalidArgument("strategy grid differs from the lattice grid");
  }
  if (fixed.subgrid.indices().back() != n) throw InvalidArgument("sub-grid does not end at t_n");
  if (!rule.is_random() && rule.marks().marks.size() != n) {
    throw InvalidArgument("mark count does not match the partition");
  }
  const std::size_t own = fixed.side == Side::kU ? lattice.u_count() : lattice.v_count();
  const std::size_t opp = fixed.side == Side::kU ? lattice.v_count() : lattice.u_count();
  if (fixed.own_actions != own || fixed.counter_table.size() != opp) {
    throw InvalidArgument("strategy action counts differ from the lattice");
  }
  const Side responder = fixed.side == Side::kU ? Side::kV : Side::kU;
  const std::size_t reply_opp = own;  // responder's counter-map domain

  const auto& idx = fixed.subgrid.indices();
  Eigen::VectorXd times(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) times(i) = lattice.partition().times()(idx[i]);
  BestResponse br(responder, fixed.subgrid, make_field(times, grid));
  RowMatrixXd& val = br.value_.values;
  const std::size_t blocks = fixed.subgrid.blocks();
  fill_terminal(spec, grid, val, blocks);
  br.blocks_.resize(blocks);

  Eigen::VectorXd j_cur(nodes);
  Eigen::VectorXd j_next(nodes);
  for (std::size_t i = blocks; i-- > 0;) {
    const std::size_t begin = fixed.subgrid.block_start(i);
    const std::size_t end = fixed.subgrid.block_end(i);
    BestResponse::Block& block = br.blocks_[i];
    block.policy_of_node.assign(nodes, -1);
    std::unordered_map<std::uint64_t, int> seen;
    std::vector<std::uint64_t> ids;
    for (std::size_t y = 0; y < nodes; ++y) {
      const std::uint64_t id = fixed.commitment(i, y);
      auto [it, fresh] = seen.emplace(id, static_cast<int>(ids.size()));
      if (fresh) ids.push_back(id);
      block.policy_of_node[y] = it->second;
    }
    for (std::uint64_t id : ids) {
      const Commitment c = decode(id, own, opp);
      BestResponse::Policy pol{Eigen::MatrixXi::Zero(end - begin, nodes),
                               std::vector<Eigen::MatrixXi>(
                                   reply_opp, Eigen::MatrixXi::Zero(end - begin, nodes))};
      std::span<const double> cont = row_span(val, i + 1);
      for (std::size_t k = end; k > begin; --k) {
        respond_step(lattice, rule, k, fixed.side, c, cont, {j_cur.data(), nodes}, &pol.plain,
                     &pol.counter, static_cast<Eigen::Index>(k - begin - 1));
        j_next.swap(j_cur);
        cont = {j_next.data(), nodes};
      }
      const int slot = seen[id];
      for (std::size_t y = 0; y < nodes; ++y) {
        if (block.policy_of_node[y] == slot) val(i, y) = j_next(y);
      }
      block.policies.push_back(std::move(pol));
    }
  }
  return br;
}

}  // namespace isaacs
