#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "isaacs/dp.hpp"
#include "isaacs/lattice.hpp"
#include "isaacs/pde.hpp"
#include "isaacs/problem.hpp"
#include "isaacs/schedule.hpp"
#include "isaacs/strategy.hpp"

namespace isaacs {

/// One uniform [0,1) draw per interval for path `path` of a run seeded `seed`.
class CoinSource {
 public:
  CoinSource(std::uint64_t seed, std::uint64_t path);
  double next() { return unit_interval(gen_()); }

 private:
  std::mt19937_64 gen_;
};

/// Brownian increments N(0, h) for path `path` of a run seeded `seed`.
class NoiseSource {
 public:
  NoiseSource(std::uint64_t seed, std::uint64_t path);
  double increment(double h) { return std::sqrt(h) * normal_(gen_); }

 private:
  std::mt19937_64 gen_;
  std::normal_distribution<double> normal_;
};

struct SimulationSettings {
  std::size_t paths = 1000;
  std::size_t substeps = 4;
  std::uint64_t noise_seed = 1;
  std::uint64_t coin_seed = 2;
  // Number of leading PathRecords kept in the result.
  std::size_t keep_paths = 0;
};

struct PathRecord {
  std::vector<double> times;   // t_0..t_n
  std::vector<double> states;  // raw (unclamped) X at t_0..t_n
  std::vector<std::size_t> u_actions;
  std::vector<std::size_t> v_actions;
  std::vector<double> coins;
  std::vector<int> priority;  // 1: v saw u on the interval
  std::vector<double> noise;  // Brownian increments, `substeps` per interval
  double payoff = 0.0;
};

struct SimulationResult {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t paths = 0;
  // Decision-time states outside the lookup grid (strategies saw the clamp).
  std::size_t clamped_lookups = 0;
  std::vector<PathRecord> sample;
};

/// Monte Carlo of E[g(X_T)] from the problem's start state. Per interval the
/// priority is resolved (mark, or coin < p(t_{k-1}, X_{t_{k-1}}) in random
/// mode), the leader's plain action is answered by the follower's counter,
/// and the frozen pair drives `substeps` Euler steps. A coin is drawn every
/// interval in both modes. Throws NumericalError when a decision-time state
/// lies more than half the grid width beyond `domain`.
SimulationResult simulate(const ProblemSpec& spec, const Partition& partition,
                          const PriorityRule& mode, const Strategy& u, const Strategy& v,
                          const SimulationSettings& settings, const SpatialGrid& domain);

struct ChallengerResult {
  std::string label;
  double mean = 0.0;
  double std_error = 0.0;
};

struct ExploitabilityReport {
  Side fixed_side = Side::kU;
  std::vector<ChallengerResult> challengers;  // [0] is the lattice best response
  std::size_t extreme = 0;  // best challenger for the opponent of the fixed side
  double extreme_mean = 0.0;
  double extreme_std_error = 0.0;
  double best_response_value = 0.0;  // lattice value of challengers[0] at (s, x)
  double shift = 0.0;                // extreme_mean - challengers[0].mean
};

/// Plays `fixed` against `challengers` opponents under common random numbers:
/// the lattice best response, hashed perturbations of it, random Markov and
/// random feedback strategies (all seeded from `seed`).
ExploitabilityReport exploitability(const ProblemSpec& spec, const TransitionModel& lattice,
                                    const PriorityRule& mode, const MarkovStrategy& fixed,
                                    std::size_t challengers, std::uint64_t seed,
                                    const SimulationSettings& settings);

}  // namespace isaacs
