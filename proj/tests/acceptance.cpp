// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "isaacs/config.hpp"
#include "isaacs/dp.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/experiment.hpp"
#include "isaacs/hamiltonian.hpp"
#include "isaacs/lattice.hpp"
#include "isaacs/pde.hpp"
#include "isaacs/schedule.hpp"
#include "isaacs/simulate.hpp"
#include "isaacs/static_game.hpp"

using namespace isaacs;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeed = 20260101;

struct Outcome {
  bool pass;
  std::string detail;
};

struct Criterion {
  int id;
  const char* name;
  double budget_seconds;
  std::function<Outcome()> run;
};

std::string fmt(const char* f, double a) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, a);
  return buf;
}

PrioritySpec constant(double p) { return {PriorityFamily::kConstant, {p}}; }
PrioritySpec linear_time() { return {PriorityFamily::kLinearTime, {0.3, 0.4}}; }

// 1 ------------------------------------------------------------------------
Outcome static_identity() {
  std::mt19937_64 rng(kSeed);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    LocalGameMatrix<double> f(size(rng), size(rng));
    for (Eigen::Index i = 0; i < f.size(); ++i) f.data()[i] = entry(rng);
    worst = std::max(worst, representation_residual(f, prob(rng)).residual);
  }
  return {worst <= 1e-12, "max residual " + fmt("%.3g", worst) + " over 100 games"};
}

// 2 ------------------------------------------------------------------------
Outcome hamiltonian_sandwich() {
  std::mt19937_64 rng(kSeed + 2);
  std::uniform_real_distribution<double> time(0.0, 0.5);
  std::uniform_real_distribution<double> prob(0.0, 1.0);
  std::normal_distribution<double> z(0.0, 3.0);
  const auto zero = bilinear_benchmark(constant(0.0));
  const auto one = bilinear_benchmark(constant(1.0));
  double worst = 0.0;
  bool bitwise = true;
  for (int i = 0; i < 10000; ++i) {
    const DifferentialState ds{time(rng), VectorXd::Constant(1, z(rng)),
                               VectorXd::Constant(1, z(rng)), MatrixXd::Constant(1, 1, z(rng))};
    const auto h = hamiltonians(bilinear_benchmark(constant(prob(rng))), ds);
    worst = std::max({worst, h.lower - h.mixed, h.mixed - h.upper});
    bitwise = bitwise && hamiltonian_mixed(zero, ds) == hamiltonian_upper(zero, ds) &&
              hamiltonian_mixed(one, ds) == hamiltonian_lower(one, ds);
  }
  return {worst <= 1e-12 && bitwise, "max sandwich violation " + fmt("%.3g", worst) +
                                         (bitwise ? ", extremes bitwise" : ", extremes differ")};
}

// 3 ------------------------------------------------------------------------
double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
double normal_pdf(double x) { return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI); }

// E min(Y^2, cap), Y ~ N(m, s^2).
double capped_square(double m, double s, double cap) {
  const double r = std::sqrt(cap);
  const double a = (-r - m) / s;
  const double b = (r - m) / s;
  const double inside = (m * m + s * s) * (normal_cdf(b) - normal_cdf(a)) +
                        2.0 * m * s * (normal_pdf(a) - normal_pdf(b)) +
                        s * s * (a * normal_pdf(a) - b * normal_pdf(b));
  return inside + cap * (1.0 - normal_cdf(b) + normal_cdf(a));
}

ProblemSpec singleton_problem(double mu, double sigma, PayoffSpec g, double horizon) {
  CoefficientSpec c{CoefficientFamily::kConstant, {mu, sigma}, 1, 1};
  const auto one = ActionSet::scalars({0.0});
  return ProblemSpec(c, std::move(g), constant(0.5), one, one, horizon, 0.0, VectorXd::Zero(1));
}

double oracle_error(const ProblemSpec& spec, double lower, double upper, double dx,
                    const std::function<double(double)>& exact) {
  const auto nodes = static_cast<std::size_t>(std::lround((upper - lower) / dx)) + 1;
  const SpatialGrid grid(lower, upper, nodes);
  const ValueField f = solve(spec, grid, cfl_max_dt(spec, grid));
  double err = 0.0;
  for (std::size_t j = 0; j < nodes; ++j) {
    const double x = grid.node(j);
    if (std::abs(x) <= 2.0) err = std::max(err, std::abs(f.values(0, j) - exact(x)));
  }
  return err;
}

Outcome pde_oracle() {
  const double tau = 0.5;
  const auto quad = singleton_problem(0.0, std::sqrt(2.0),
                                      {PayoffFamily::kQuadraticCapped, {25.0}}, tau);
  const double e_quad = oracle_error(quad, -10.0, 10.0, 0.05, [&](double x) {
    return capped_square(x, std::sqrt(2.0 * tau), 25.0);
  });
  const auto cosine = singleton_problem(0.5, 1.0, {PayoffFamily::kCos, {1.0, 1.0, 0.0}}, 1.0);
  const auto exact_cos = [](double x) { return std::cos(x + 0.5) * std::exp(-0.5); };
  const double coarse = oracle_error(cosine, -8.0, 8.0, 0.1, exact_cos);
  const double fine = oracle_error(cosine, -8.0, 8.0, 0.05, exact_cos);
  const double ratio = coarse / fine;
  const bool pass = e_quad < 2e-2 && fine < 2e-2 && ratio >= 2.5 && ratio <= 5.0;
  return {pass, "x^2 error " + fmt("%.3g", e_quad) + ", cos error " + fmt("%.3g", fine) +
                    ", ratio dx 0.1/0.05 " + fmt("%.3f", ratio)};
}

// 4, 5, 6 share the convergence runs.
struct ConvergeRuns {
  ConvergenceTable half;
  ConvergenceTable linear;
  bool done = false;
};

ConvergeRuns& converge_runs() {
  static ConvergeRuns runs;
  if (!runs.done) {
    for (auto* slot : {&runs.half, &runs.linear}) {
      ExperimentConfig c = benchmark_config(slot == &runs.half ? constant(0.5) : linear_time(),
                                            kSeed);
      c.run.mode = "both";
      c.run.paths = 0;
      c.run.levels = {25, 50, 100};
      *slot = run_converge(c);
    }
    runs.done = true;
  }
  return runs;
}

std::string gaps(const ConvergenceTable& t, bool random) {
  std::string s;
  for (const auto& r : t.rows) {
    s += (s.empty() ? "" : "/") + fmt("%.4f", random ? r.gap_random : r.gap_deterministic);
  }
  return s;
}

Outcome game_pde_convergence() {
  auto& runs = converge_runs();
  bool pass = true;
  for (const auto* t : {&runs.half, &runs.linear}) {
    for (std::size_t i = 1; i < t->rows.size(); ++i) {
      pass = pass && t->rows[i].gap_random <= 1.1 * t->rows[i - 1].gap_random;
    }
    pass = pass && t->rows.back().gap_random <= 5e-2;
  }
  return {pass, "random gaps n=25/50/100: p=0.5 " + gaps(runs.half, true) + ", p=0.3+0.4t " +
                    gaps(runs.linear, true)};
}

Outcome deterministic_convergence() {
  auto& runs = converge_runs();
  bool pass = true;
  double worst_ratio = 0.0;
  for (const auto* t : {&runs.half, &runs.linear}) {
    for (const auto& r : t->rows) {
      worst_ratio = std::max(worst_ratio, r.gap_deterministic / r.gap_random);
    }
    pass = pass && t->rows.back().gap_deterministic <= 5e-2;
  }
  pass = pass && worst_ratio <= 1.5;
  return {pass, "mark gaps: p=0.5 " + gaps(runs.half, false) + ", p=0.3+0.4t " +
                    gaps(runs.linear, false) + ", worst ratio to random " +
                    fmt("%.3f", worst_ratio)};
}

Outcome value_ordering() {
  auto& runs = converge_runs();
  double dp_violation = -1.0;
  for (const auto* t : {&runs.half, &runs.linear}) {
    for (const auto& r : t->rows) dp_violation = std::max(dp_violation, r.ordering_violation);
  }
  const auto spec = bilinear_benchmark(constant(0.5));
  const SpatialGrid grid(-10.0, 10.0, 2001);
  const double dt = cfl_max_dt(spec, grid);
  PdeOptions opt;
  opt.save_times = {0.1, 0.2, 0.3, 0.4};
  opt.kind = HamiltonianKind::kLower;
  const auto lo = solve(spec, grid, dt, opt);
  opt.kind = HamiltonianKind::kUpper;
  const auto up = solve(spec, grid, dt, opt);
  opt.kind = HamiltonianKind::kMixed;
  const auto mid = solve(spec, grid, dt, opt);
  const double pde_violation =
      std::max((lo.values - mid.values).maxCoeff(), (mid.values - up.values).maxCoeff());
  double interior_gap = 0.0;
  for (std::size_t j = 0; j < grid.nodes(); ++j) {
    if (std::abs(grid.node(j)) <= 2.0) {
      interior_gap = std::max(interior_gap, up.values(0, j) - lo.values(0, j));
    }
  }
  const bool pass = dp_violation <= 1e-9 && pde_violation <= 1e-9 && interior_gap > 1e-3;
  return {pass, "max V_minus - V_plus " + fmt("%.3g", dp_violation) + ", pde ordering " +
                    fmt("%.3g", pde_violation) + ", Isaacs gap " + fmt("%.4f", interior_gap)};
}

// 7 ------------------------------------------------------------------------
Outcome monte_carlo() {
  const auto spec = bilinear_benchmark(constant(0.5), 0.5);
  const SpatialGrid grid(-10.0, 10.0, 2001);
  const auto part = make_uniform_partition(0.0, 0.5, 50);
  const auto lat = build_lattice(spec, grid, part, 3);
  const auto t = dp_value_random(spec, part, lat);
  const auto rule = PriorityRule::coin(spec.priority());
  SimulationSettings s;
  s.paths = 100000;
  s.substeps = 4;
  std::seed_seq seq{kSeed, std::uint64_t{7}};
  std::uint32_t seeds[2];
  seq.generate(seeds, seeds + 2);
  s.noise_seed = seeds[0];
  s.coin_seed = seeds[1];
  const auto mc = simulate(spec, part, rule, t.strategy_u, t.strategy_v, s, grid);
  const double v = t.value.interpolate(0, 0.5);
  const bool mc_ok = std::abs(mc.mean - v) <= 3.0 * mc.std_error;

  SimulationSettings ch = s;
  ch.paths = 20000;
  const auto vs_u = exploitability(spec, lat, rule, t.strategy_u, 50, kSeed + 11, ch);
  const auto vs_v = exploitability(spec, lat, rule, t.strategy_v, 50, kSeed + 12, ch);
  const double v_minus = t.v_minus.interpolate(0, 0.5);
  const double v_plus = t.v_plus.interpolate(0, 0.5);
  const bool u_ok = vs_u.extreme_mean >= v_minus - 3.0 * vs_u.extreme_std_error;
  const bool v_ok = vs_v.extreme_mean <= v_plus + 3.0 * vs_v.extreme_std_error;
  return {mc_ok && u_ok && v_ok,
          "MC " + fmt("%.5f", mc.mean) + " +- " + fmt("%.5f", mc.std_error) + " vs DP " +
              fmt("%.5f", v) + "; worst challenger vs u " + fmt("%.5f", vs_u.extreme_mean) +
              ", vs v " + fmt("%.5f", vs_v.extreme_mean)};
}

// 8 ------------------------------------------------------------------------
Outcome density() {
  bool forced_ok = true;
  for (std::size_t n : {10u, 25u, 50u, 100u, 250u, 1000u}) {
    const auto part = make_uniform_partition(0.0, 0.5, n);
    const auto block = static_cast<std::size_t>(std::lround(std::sqrt(double(n))));
    for (const auto& p : {constant(0.0), constant(0.3), constant(0.5), constant(1.0),
                          linear_time()}) {
      const auto sm = make_marks(part, p, block);
      forced_ok = forced_ok &&
                  check_density(part, sm.marks, sm.subgrid, p, forced_epsilon(part, sm.subgrid, p))
                      .pass;
    }
  }
  bool exact_ok = true;
  for (double p : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    const auto part = make_uniform_partition(0.0, 1.0, 64);
    const auto sm = make_marks(part, constant(p), 8);
    const auto r = check_density(part, sm.marks, sm.subgrid, constant(p), 0.125);
    exact_ok = exact_ok && r.pass && r.max_deviation == 0.0;
  }
  const auto part = make_uniform_partition(0.0, 1.0, 100);
  const MarkSequence ones{std::vector<int>(100, 1)};
  const auto sub = SubGrid::uniform_blocks(100, 10);
  bool ones_fail = true;
  for (double eps : {0.1, 0.3, 0.49, 0.4999}) {
    ones_fail = ones_fail && !check_density(part, ones, sub, constant(0.5), eps).pass;
  }
  return {forced_ok && exact_ok && ones_fail,
          std::string("forced epsilon ") + (forced_ok ? "passes" : "fails") +
              ", exact fractions " + (exact_ok ? "zero deviation" : "deviate") +
              ", all-ones " + (ones_fail ? "rejected below 0.5" : "accepted below 0.5")};
}

// 9 ------------------------------------------------------------------------
std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

Outcome determinism() {
  ExperimentConfig c = benchmark_config(linear_time(), kSeed);
  c.start_state = 0.5;
  c.run.mode = "both";
  c.discretization.nodes = 401;
  c.discretization.reference_nodes = 401;
  c.discretization.intervals = 16;
  c.run.levels = {8, 16};
  c.run.paths = 2000;
  c.run.keep_paths = 3;
  c.run.challengers = 4;
  c.run.challenger_paths = 1000;
  const fs::path root = fs::temp_directory_path() / "isaacs_acceptance_replay";
  fs::remove_all(root);
  std::size_t compared = 0;
  bool same = true;
  for (Command cmd : {Command::kStatic, Command::kHamiltonian, Command::kSchedule, Command::kPde,
                      Command::kDp, Command::kSimulate, Command::kConverge}) {
    const fs::path first = root / (std::string(command_name(cmd)) + "_first");
    const fs::path again = root / (std::string(command_name(cmd)) + "_replay");
    try {
      run_command(cmd, c, first);
    } catch (const DensityError&) {
    }
    const Manifest m = load_manifest(first / "manifest.ini");
    try {
      run_command(m.command, m.config, again);
    } catch (const DensityError&) {
    }
    for (const auto& name : m.files) {
      same = same && slurp(first / name) == slurp(again / name);
      ++compared;
    }
  }
  fs::remove_all(root);
  return {same && compared > 0,
          std::to_string(compared) + " CSV files " + (same ? "identical" : "differ") +
              " after manifest replay"};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "static representation identity", 30, static_identity},
      {2, "Hamiltonian sandwich", 10, hamiltonian_sandwich},
      {3, "PDE oracle match", 60, pde_oracle},
      {4, "game-PDE convergence (coin)", 300, game_pde_convergence},
      {5, "deterministic-mark convergence", 300, deterministic_convergence},
      {6, "value ordering", 300, value_ordering},
      {7, "Monte Carlo consistency", 300, monte_carlo},
      {8, "density machinery", 60, density},
      {9, "manifest replay determinism", 300, determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o{false, ""};
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("error: ") + e.what()};
    }
    const double secs =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs <= c.budget_seconds;
    const bool pass = o.pass && in_time;
    failures += pass ? 0 : 1;
    std::printf("criterion %d %s: %s; %s (%.1f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                o.detail.c_str(), secs, in_time ? "" : ", over budget");
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failures,
              criteria.size());
  return failures == 0 ? 0 : 1;
}
