#include "isaacs/simulate.hpp"

#include "isaacs/errors.hpp"

#include <cmath>
#include <memory>

namespace isaacs {

namespace {

std::seed_seq derived_seed(std::uint64_t seed, std::uint64_t path, std::uint32_t tag) {
  return std::seed_seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                       static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32),
                       tag};
}

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t path, std::uint32_t tag) {
  auto seq = derived_seed(seed, path, tag);
  return std::mt19937_64(seq);
}

}  // namespace

CoinSource::CoinSource(std::uint64_t seed, std::uint64_t path)
    : gen_(make_engine(seed, path, 0xC014)) {}

NoiseSource::NoiseSource(std::uint64_t seed, std::uint64_t path)
    : gen_(make_engine(seed, path, 0x4015E)) {}

SimulationResult simulate(const ProblemSpec& spec, const Partition& partition,
                          const PriorityRule& mode, const Strategy& u, const Strategy& v,
                          const SimulationSettings& settings, const SpatialGrid& domain) {
  if (spec.dimension() != 1) throw InvalidArgument("simulation needs a one-dimensional state");
  if (settings.paths == 0) throw InvalidArgument("need at least one path");
  if (settings.substeps == 0) throw InvalidArgument("need at least one Euler sub-step");
  if (std::abs(partition.start() - spec.start_time()) > 1e-12 ||
      std::abs(partition.end() - spec.horizon()) > 1e-12) {
    throw InvalidArgument("partition must span [s, T] of the problem");
  }
  const std::size_t n = partition.intervals();
  if (!mode.is_random() && mode.marks().marks.size() != n) {
    throw InvalidArgument("mark count does not match the partition");
  }
  const std::size_t nu = spec.u_set().size();
  const std::size_t nv = spec.v_set().size();
  const double x0 = spec.start_state()(0);
  const auto& times = partition.times();

  SimulationResult out;
  out.paths = settings.paths;
  double mean = 0.0;
  double m2 = 0.0;
  std::vector<double> states(n + 1);
  for (std::size_t path = 0; path < settings.paths; ++path) {
    CoinSource coins(settings.coin_seed, path);
    NoiseSource noise(settings.noise_seed, path);
    const bool keep = path < settings.keep_paths;
    PathRecord rec;
    if (keep) {
      rec.times.assign(times.data(), times.data() + times.size());
      rec.u_actions.reserve(n);
      rec.v_actions.reserve(n);
      rec.coins.reserve(n);
      rec.priority.reserve(n);
      rec.noise.reserve(n * settings.substeps);
    }

    double x = x0;
    states[0] = x;
    for (std::size_t k = 1; k <= n; ++k) {
      const double t = times(k - 1);
      const double coin = coins.next();
      if (domain.far_outside(x)) {
        throw NumericalError("simulated state " + std::to_string(x) +
                             " left the strategy domain at t = " + std::to_string(t));
      }
      if (x < domain.lower() || x > domain.upper()) ++out.clamped_lookups;
      const bool v_sees_u =
          mode.is_random() ? coin < mode.weight(k, t, x) : mode.marks().marks[k - 1] == 1;

      const std::span<const double> history(states.data(), k);
      std::size_t a;
      std::size_t b;
      if (v_sees_u) {
        a = u.plain(k, history);
        if (a >= nu) throw InvalidArgument("u strategy returned an unknown action");
        b = v.counter(k, history, a);
        if (b >= nv) throw InvalidArgument("v strategy returned an unknown action");
      } else {
        b = v.plain(k, history);
        if (b >= nv) throw InvalidArgument("v strategy returned an unknown action");
        a = u.counter(k, history, b);
        if (a >= nu) throw InvalidArgument("u strategy returned an unknown action");
      }

      const double h = partition.step(k) / static_cast<double>(settings.substeps);
      for (std::size_t j = 0; j < settings.substeps; ++j) {
        const auto c = eval_scalar(spec, t + h * static_cast<double>(j), x, a, b);
        const double dw = noise.increment(h);
        x = x + c.drift * h + std::sqrt(c.variance) * dw;
        if (keep) rec.noise.push_back(dw);
      }
      if (!std::isfinite(x)) throw NumericalError("simulated state is not finite");
      states[k] = x;
      if (keep) {
        rec.u_actions.push_back(a);
        rec.v_actions.push_back(b);
        rec.coins.push_back(coin);
        rec.priority.push_back(v_sees_u ? 1 : 0);
      }
    }

    const double payoff = spec.payoff()(x);
    // Welford update, in path order.
    const double delta = payoff - mean;
    mean += delta / static_cast<double>(path + 1);
    m2 += delta * (payoff - mean);
    if (keep) {
      rec.states = states;
      rec.payoff = payoff;
      out.sample.push_back(std::move(rec));
    }
  }
  out.mean = mean;
  const double paths = static_cast<double>(settings.paths);
  out.std_error = settings.paths > 1 ? std::sqrt(m2 / (paths - 1.0) / paths) : 0.0;
  return out;
}

ExploitabilityReport exploitability(const ProblemSpec& spec, const TransitionModel& lattice,
                                    const PriorityRule& mode, const MarkovStrategy& fixed,
                                    std::size_t challengers, std::uint64_t seed,
                                    const SimulationSettings& settings) {
  if (challengers == 0) throw InvalidArgument("need at least one challenger");
  const SpatialGrid& grid = lattice.grid();
  const Side other = fixed.side == Side::kU ? Side::kV : Side::kU;
  const std::size_t own = other == Side::kU ? spec.u_set().size() : spec.v_set().size();
  const std::size_t opp = other == Side::kU ? spec.v_set().size() : spec.u_set().size();

  auto br = std::make_shared<BestResponse>(best_response(spec, lattice, mode, fixed));
  ExploitabilityReport report;
  report.fixed_side = fixed.side;
  report.best_response_value = br->value().interpolate(0, spec.start_state()(0));

  static constexpr double kRates[] = {0.02, 0.05, 0.1, 0.2};
  for (std::size_t c = 0; c < challengers; ++c) {
    std::shared_ptr<const Strategy> challenger;
    std::string label;
    const std::uint64_t cseed = mix64(seed ^ mix64(c));
    if (c == 0) {
      challenger = br;
      label = "best_response";
    } else if (c % 3 == 1) {
      const double rate = kRates[(c / 3) % 4];
      challenger = std::make_shared<PerturbedStrategy>(br, grid, own, rate, cseed);
      label = "perturbed_" + std::to_string(c);
    } else if (c % 3 == 2) {
      challenger = std::make_shared<MarkovStrategy>(
          random_markov_strategy(other, fixed.subgrid, grid, own, opp, cseed));
      label = "random_markov_" + std::to_string(c);
    } else {
      challenger = std::make_shared<RandomFeedbackStrategy>(grid, own, cseed);
      label = "random_feedback_" + std::to_string(c);
    }
    const Strategy& su = fixed.side == Side::kU ? static_cast<const Strategy&>(fixed) : *challenger;
    const Strategy& sv = fixed.side == Side::kV ? static_cast<const Strategy&>(fixed) : *challenger;
    const SimulationResult r =
        simulate(spec, lattice.partition(), mode, su, sv, settings, grid);
    report.challengers.push_back({label, r.mean, r.std_error});
  }

  // u challengers push the payoff up, v challengers push it down.
  for (std::size_t c = 1; c < report.challengers.size(); ++c) {
    const double m = report.challengers[c].mean;
    const double best = report.challengers[report.extreme].mean;
    if (other == Side::kU ? m > best : m < best) report.extreme = c;
  }
  report.extreme_mean = report.challengers[report.extreme].mean;
  report.extreme_std_error = report.challengers[report.extreme].std_error;
  report.shift = report.extreme_mean - report.challengers[0].mean;
  return report;
}

}  // namespace isaacs
