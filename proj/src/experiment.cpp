#include "isaacs/experiment.hpp"

#include "isaacs/dp.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/hamiltonian.hpp"
#include "isaacs/lattice.hpp"
#include "isaacs/schedule.hpp"
#include "isaacs/simulate.hpp"
#include "isaacs/static_game.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace isaacs {

namespace fs = std::filesystem;

namespace {

constexpr std::array<std::pair<Command, std::string_view>, 7> kCommands{{
    {Command::kStatic, "static"},
    {Command::kHamiltonian, "hamiltonian"},
    {Command::kSchedule, "schedule"},
    {Command::kPde, "pde"},
    {Command::kDp, "dp"},
    {Command::kSimulate, "simulate"},
    {Command::kConverge, "converge"},
}};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string num(double x) { return std::isnan(x) ? std::string() : format_double(x); }
std::string num(std::size_t x) { return std::to_string(x); }

SpatialGrid dp_grid(const ExperimentConfig& c) {
  return SpatialGrid(c.discretization.lower, c.discretization.upper, c.discretization.nodes);
}

Partition partition_for(const ExperimentConfig& c, std::size_t intervals) {
  return make_uniform_partition(c.start_time, c.horizon, intervals);
}

double pde_dt(const ExperimentConfig& c, const ProblemSpec& spec, const SpatialGrid& grid) {
  if (c.discretization.dt_policy == "fixed") return c.discretization.dt;
  const double dt = cfl_max_dt(spec, grid);
  return std::isfinite(dt) ? dt : c.horizon - c.start_time;
}

SimulationSettings sim_settings(const ExperimentConfig& c, std::size_t paths) {
  SimulationSettings s;
  s.paths = paths;
  s.substeps = c.run.substeps;
  s.noise_seed = c.run.seed;
  s.coin_seed = c.run.seed;
  s.keep_paths = std::min(c.run.keep_paths, paths);
  return s;
}

struct DpRun {
  std::string mode;
  PriorityRule rule;
  GameValueTables tables;
};

DpRun run_dp(const ExperimentConfig& c, const ProblemSpec& spec, const Partition& partition,
             const TransitionModel& lattice, bool random) {
  if (random) {
    return {"random", PriorityRule::coin(spec.priority()),
            dp_value_random(spec, partition, lattice)};
  }
  const ScheduledMarks sm = make_marks(partition, spec.priority(), c.block_for(partition.intervals()));
  return {"deterministic", PriorityRule::scheduled(sm.marks),
          dp_value_deterministic(spec, partition, sm.marks, sm.subgrid, lattice)};
}

// Slices at the sub-grid times only.
ValueField block_slices(const ValueField& f, const SubGrid& subgrid) {
  const auto& idx = subgrid.indices();
  ValueField out{Eigen::VectorXd(idx.size()), f.grid, RowMatrixXd(idx.size(), f.grid.nodes())};
  for (std::size_t i = 0; i < idx.size(); ++i) {
    out.times(i) = f.times(idx[i]);
    out.values.row(i) = f.values.row(idx[i]);
  }
  return out;
}

double max_ordering_violation(const GameValueTables& t) {
  return (t.v_minus.values - t.v_plus.values).maxCoeff();
}

CsvTable value_table(const GameValueTables& t) {
  CsvTable csv({"t", "x", "value", "v_minus", "v_plus"});
  const SpatialGrid& g = t.value.grid;
  for (std::size_t k = 0; k < t.value.slices(); ++k) {
    for (std::size_t n = 0; n < g.nodes(); ++n) {
      csv.add_row({num(t.value.times(k)), num(g.node(n)), num(t.value.values(k, n)),
                   num(t.v_minus.values(k, n)), num(t.v_plus.values(k, n))});
    }
  }
  return csv;
}

CsvTable strategy_table(const MarkovStrategy& s, const Partition& partition) {
  std::vector<std::string> header{"block", "t", "x", "plain"};
  for (std::size_t j = 0; j < s.counter_table.size(); ++j) {
    header.push_back("counter_" + std::to_string(j));
  }
  CsvTable csv(std::move(header));
  for (std::size_t b = 0; b < s.subgrid.blocks(); ++b) {
    const double t = partition.times()(s.subgrid.block_start(b));
    for (std::size_t n = 0; n < s.grid.nodes(); ++n) {
      std::vector<std::string> row{num(b), num(t), num(s.grid.node(n)),
                                   std::to_string(s.plain_table(b, n))};
      for (const auto& m : s.counter_table) row.push_back(std::to_string(m(b, n)));
      csv.add_row(std::move(row));
    }
  }
  return csv;
}

void write(const CsvTable& csv, const fs::path& out, const std::string& name,
           std::vector<std::string>& files) {
  csv.write(out / name);
  files.push_back(name);
}

// --- subcommands -----------------------------------------------------------

void cmd_static(const ExperimentConfig& c, const fs::path& out, std::vector<std::string>& files) {
  std::mt19937_64 rng(c.run.seed);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_real_distribution<double> entry(-1.0, 1.0);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  CsvTable csv({"sample", "rows", "cols", "priority", "lower", "upper", "mixed", "sup_inf",
                "inf_sup", "residual"});
  for (std::size_t s = 0; s < c.run.samples; ++s) {
    const int r = size(rng);
    const int q = size(rng);
    LocalGameMatrix<double> f(r, q);
    for (int i = 0; i < r; ++i) {
      for (int j = 0; j < q; ++j) f(i, j) = entry(rng);
    }
    const double p = unit(rng);
    const auto rep = representation_residual(f, p);
    csv.add_row({num(s), std::to_string(r), std::to_string(q), num(p), num(lower_value_only(f)),
                 num(upper_value_only(f)), num(mixed_value(f, p)), num(rep.supinf),
                 num(rep.infsup), num(rep.residual)});
  }
  write(csv, out, "static.csv", files);
}

void cmd_hamiltonian(const ExperimentConfig& c, const fs::path& out,
                     std::vector<std::string>& files) {
  const ProblemSpec spec = c.problem();
  std::mt19937_64 rng(c.run.seed);
  std::uniform_real_distribution<double> time(c.start_time, c.horizon);
  std::uniform_real_distribution<double> space(-c.discretization.window, c.discretization.window);
  std::uniform_real_distribution<double> slope(-5.0, 5.0);
  CsvTable csv({"sample", "t", "x", "grad", "hess", "priority", "h_lower", "h_mixed", "h_upper"});
  for (std::size_t s = 0; s < c.run.samples; ++s) {
    DifferentialState ds{time(rng), VectorXd::Constant(1, space(rng)),
                         VectorXd::Constant(1, slope(rng)), MatrixXd::Constant(1, 1, slope(rng))};
    const auto h = hamiltonians(spec, ds);
    csv.add_row({num(s), num(ds.t), num(ds.x(0)), num(ds.grad(0)), num(ds.hess(0, 0)),
                 num(h.priority), num(h.lower), num(h.mixed), num(h.upper)});
  }
  write(csv, out, "hamiltonian.csv", files);
}

void cmd_schedule(const ExperimentConfig& c, const fs::path& out, std::vector<std::string>& files,
                  bool& density_failed) {
  const ProblemSpec spec = c.problem();
  const Partition partition = partition_for(c, c.discretization.intervals);
  const ScheduledMarks sm =
      make_marks(partition, spec.priority(), c.block_for(partition.intervals()));
  const DensityReport rep = check_density(partition, sm.marks, sm.subgrid, spec.priority(),
                                          c.run.epsilon);
  CsvTable marks({"k", "t_start", "t_end", "block", "mark"});
  for (std::size_t k = 1; k <= partition.intervals(); ++k) {
    marks.add_row({num(k), num(partition.times()(k - 1)), num(partition.times()(k)),
                   num(sm.subgrid.block_of(k)), std::to_string(sm.marks.marks[k - 1])});
  }
  write(marks, out, "marks.csv", files);
  CsvTable density({"block", "t_start", "t_end", "target", "deviation"});
  for (std::size_t b = 0; b < sm.subgrid.blocks(); ++b) {
    const double t0 = partition.times()(sm.subgrid.block_start(b));
    density.add_row({num(b), num(t0), num(partition.times()(sm.subgrid.block_end(b))),
                     num(spec.priority()(t0, 0.0)), num(rep.deviations[b])});
  }
  write(density, out, "density.csv", files);
  CsvTable summary({"max_block_length", "max_deviation", "epsilon", "forced_epsilon", "pass"});
  summary.add_row({num(rep.max_block_length), num(rep.max_deviation), num(rep.epsilon),
                   num(forced_epsilon(partition, sm.subgrid, spec.priority())), rep.pass ? "1" : "0"});
  write(summary, out, "schedule_summary.csv", files);
  density_failed = !rep.pass;
}

void cmd_pde(const ExperimentConfig& c, const fs::path& out, std::vector<std::string>& files) {
  const ProblemSpec spec = c.problem();
  const SpatialGrid grid = dp_grid(c);
  const double dt = pde_dt(c, spec, grid);
  PdeOptions opt;
  if (c.horizon > c.start_time) {
    const Partition partition = partition_for(c, c.discretization.intervals);
    opt.save_times.assign(partition.times().data(),
                          partition.times().data() + partition.times().size());
  }
  opt.kind = HamiltonianKind::kLower;
  const ValueField lo = solve(spec, grid, dt, opt);
  opt.kind = HamiltonianKind::kMixed;
  const ValueField mid = solve(spec, grid, dt, opt);
  opt.kind = HamiltonianKind::kUpper;
  const ValueField up = solve(spec, grid, dt, opt);
  CsvTable csv({"t", "x", "v_lower", "v_mixed", "v_upper"});
  for (std::size_t k = 0; k < mid.slices(); ++k) {
    for (std::size_t n = 0; n < grid.nodes(); ++n) {
      csv.add_row({num(mid.times(k)), num(grid.node(n)), num(lo.values(k, n)),
                   num(mid.values(k, n)), num(up.values(k, n))});
    }
  }
  write(csv, out, "pde.csv", files);
  CsvTable info({"dx", "dt", "cfl_dt"});
  info.add_row({num(grid.dx()), num(dt), num(cfl_max_dt(spec, grid))});
  write(info, out, "pde_info.csv", files);
}

void cmd_dp(const ExperimentConfig& c, const fs::path& out, std::vector<std::string>& files) {
  const ProblemSpec spec = c.problem();
  const Partition partition = partition_for(c, c.discretization.intervals);
  const TransitionModel lattice =
      build_lattice(spec, dp_grid(c), partition, c.discretization.quad_points);
  for (bool random : {true, false}) {
    if (random ? c.run.mode == "deterministic" : c.run.mode == "random") continue;
    const DpRun dp = run_dp(c, spec, partition, lattice, random);
    write(value_table(dp.tables), out, "dp_" + dp.mode + ".csv", files);
    write(strategy_table(dp.tables.strategy_u, partition), out, "strategy_u_" + dp.mode + ".csv",
          files);
    write(strategy_table(dp.tables.strategy_v, partition), out, "strategy_v_" + dp.mode + ".csv",
          files);
  }
}

void cmd_simulate(const ExperimentConfig& c, const fs::path& out,
                  std::vector<std::string>& files) {
  const ProblemSpec spec = c.problem();
  const Partition partition = partition_for(c, c.discretization.intervals);
  const SpatialGrid grid = dp_grid(c);
  const TransitionModel lattice = build_lattice(spec, grid, partition, c.discretization.quad_points);
  const DpRun dp = run_dp(c, spec, partition, lattice, c.run.mode != "deterministic");

  const SimulationResult r = simulate(spec, partition, dp.rule, dp.tables.strategy_u,
                                      dp.tables.strategy_v, sim_settings(c, c.run.paths), grid);
  const double x0 = c.start_state;
  CsvTable summary({"mode", "paths", "substeps", "seed", "mean", "std_error", "dp_value",
                    "v_minus", "v_plus", "clamped_lookups"});
  summary.add_row({dp.mode, num(r.paths), num(c.run.substeps), std::to_string(c.run.seed),
                   num(r.mean), num(r.std_error), num(dp.tables.value.interpolate(0, x0)),
                   num(dp.tables.v_minus.interpolate(0, x0)),
                   num(dp.tables.v_plus.interpolate(0, x0)), num(r.clamped_lookups)});
  write(summary, out, "simulate.csv", files);

  if (!r.sample.empty()) {
    CsvTable paths({"path", "k", "t", "x", "u", "v", "coin", "v_sees_u", "payoff"});
    for (std::size_t p = 0; p < r.sample.size(); ++p) {
      const PathRecord& rec = r.sample[p];
      for (std::size_t k = 0; k < rec.states.size(); ++k) {
        const bool last = k + 1 == rec.states.size();
        paths.add_row({num(p), num(k), num(rec.times[k]), num(rec.states[k]),
                       last ? "" : num(rec.u_actions[k]), last ? "" : num(rec.v_actions[k]),
                       last ? "" : num(rec.coins[k]), last ? "" : std::to_string(rec.priority[k]),
                       last ? num(rec.payoff) : ""});
      }
    }
    write(paths, out, "paths.csv", files);
  }

  if (c.run.challengers > 0) {
    CsvTable ex({"fixed_side", "index", "challenger", "mean", "std_error", "extreme",
                 "best_response_value", "v_minus", "v_plus"});
    SimulationSettings s = sim_settings(c, c.run.challenger_paths);
    s.keep_paths = 0;
    for (const MarkovStrategy* fixed : {&dp.tables.strategy_u, &dp.tables.strategy_v}) {
      const ExploitabilityReport rep =
          exploitability(spec, lattice, dp.rule, *fixed, c.run.challengers, c.run.seed, s);
      for (std::size_t i = 0; i < rep.challengers.size(); ++i) {
        ex.add_row({fixed->side == Side::kU ? "u" : "v", num(i), rep.challengers[i].label,
                    num(rep.challengers[i].mean), num(rep.challengers[i].std_error),
                    i == rep.extreme ? "1" : "0", num(rep.best_response_value),
                    num(dp.tables.v_minus.interpolate(0, x0)),
                    num(dp.tables.v_plus.interpolate(0, x0))});
      }
    }
    write(ex, out, "exploitability.csv", files);
  }
}

std::string hex(std::uint64_t h) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace

std::string_view command_name(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "?";
}

Command parse_command(std::string_view name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  throw ConfigError("unknown command '" + std::string(name) + "'");
}

double window_gap(const ValueField& dp, const ValueField& ref, double window) {
  // Same lattice: read the nodes directly, interpolation would add rounding.
  const bool same_grid = dp.grid.lower() == ref.grid.lower() &&
                         dp.grid.upper() == ref.grid.upper() && dp.grid.nodes() == ref.grid.nodes();
  double gap = 0.0;
  for (std::size_t k = 0; k < dp.slices(); ++k) {
    const std::size_t r = ref.slice_at(dp.times(k));
    for (std::size_t n = 0; n < dp.grid.nodes(); ++n) {
      const double x = dp.grid.node(n);
      if (std::abs(x) > window) continue;
      const double v = same_grid ? ref.values(r, n) : ref.interpolate(r, x);
      gap = std::max(gap, std::abs(dp.values(k, n) - v));
    }
  }
  return gap;
}

CsvTable ConvergenceTable::csv() const {
  CsvTable t({"intervals", "block", "gap_random", "gap_deterministic", "ordering_violation",
              "dp_value", "mc_mean", "mc_std_error", "reference_dx", "reference_dt"});
  for (const auto& r : rows) {
    t.add_row({num(r.intervals), num(r.block), num(r.gap_random), num(r.gap_deterministic),
               num(r.ordering_violation), num(r.dp_value), num(r.mc_mean), num(r.mc_std_error),
               num(reference_dx), num(reference_dt)});
  }
  return t;
}

ConvergenceTable run_converge(const ExperimentConfig& c) {
  if (c.run.levels.size() < 2) throw ConfigError("converge needs at least two refinement levels");
  const ProblemSpec spec = c.problem();
  const bool want_random = c.run.mode != "deterministic";
  const bool want_det = c.run.mode != "random";
  const SpatialGrid grid = dp_grid(c);
  const SpatialGrid ref_grid(c.discretization.lower, c.discretization.upper,
                             c.discretization.reference_nodes);
  const double x0 = c.start_state;

  ConvergenceTable table;
  table.reference_dx = ref_grid.dx();
  table.reference_dt = pde_dt(c, spec, ref_grid);

  if (!(c.horizon > c.start_time)) {
    // Nothing to integrate: every value is the terminal payoff.
    const ValueField ref = solve(spec, ref_grid, table.reference_dt);
    ValueField terminal{ref.times, grid, RowMatrixXd(1, grid.nodes())};
    for (std::size_t n = 0; n < grid.nodes(); ++n) terminal.values(0, n) = spec.payoff()(grid.node(n));
    const double gap = window_gap(terminal, ref, c.discretization.window);
    for (std::size_t n : c.run.levels) {
      table.rows.push_back({n, c.block_for(n), want_random ? gap : kNaN, want_det ? gap : kNaN,
                            0.0, spec.payoff()(x0), c.run.paths > 0 ? spec.payoff()(x0) : kNaN,
                            c.run.paths > 0 ? 0.0 : kNaN});
    }
    return table;
  }

  PdeOptions opt;
  for (std::size_t n : c.run.levels) {
    const Partition p = partition_for(c, n);
    opt.save_times.insert(opt.save_times.end(), p.times().data(), p.times().data() + p.times().size());
  }
  const ValueField ref = solve(spec, ref_grid, table.reference_dt, opt);

  for (std::size_t n : c.run.levels) {
    const Partition partition = partition_for(c, n);
    const TransitionModel lattice =
        build_lattice(spec, grid, partition, c.discretization.quad_points);
    ConvergenceRow row{n, c.block_for(n), kNaN, kNaN, -std::numeric_limits<double>::infinity(),
                       kNaN, kNaN, kNaN};
    if (want_det) {
      const DpRun dp = run_dp(c, spec, partition, lattice, false);
      // Within a block the marks only balance out at its end, so the
      // deterministic value is compared where fresh blocks start.
      row.gap_deterministic =
          window_gap(block_slices(dp.tables.value, dp.tables.strategy_u.subgrid), ref,
                     c.discretization.window);
      row.ordering_violation = std::max(row.ordering_violation, max_ordering_violation(dp.tables));
      row.dp_value = dp.tables.value.interpolate(0, x0);
    }
    if (want_random) {
      const DpRun dp = run_dp(c, spec, partition, lattice, true);
      row.gap_random = window_gap(dp.tables.value, ref, c.discretization.window);
      row.ordering_violation = std::max(row.ordering_violation, max_ordering_violation(dp.tables));
      row.dp_value = dp.tables.value.interpolate(0, x0);
      if (c.run.paths > 0) {
        SimulationSettings s = sim_settings(c, c.run.paths);
        s.keep_paths = 0;
        const SimulationResult r =
            simulate(spec, partition, dp.rule, dp.tables.strategy_u, dp.tables.strategy_v, s, grid);
        row.mc_mean = r.mean;
        row.mc_std_error = r.std_error;
      }
    }
    table.rows.push_back(row);
  }
  return table;
}

std::vector<std::string> run_command(Command command, const ExperimentConfig& config,
                                     const fs::path& out) {
  fs::create_directories(out);
  std::vector<std::string> files;
  bool density_failed = false;
  switch (command) {
    case Command::kStatic:
      cmd_static(config, out, files);
      break;
    case Command::kHamiltonian:
      cmd_hamiltonian(config, out, files);
      break;
    case Command::kSchedule:
      cmd_schedule(config, out, files, density_failed);
      break;
    case Command::kPde:
      cmd_pde(config, out, files);
      break;
    case Command::kDp:
      cmd_dp(config, out, files);
      break;
    case Command::kSimulate:
      cmd_simulate(config, out, files);
      break;
    case Command::kConverge:
      write(run_converge(config).csv(), out, "converge.csv", files);
      break;
  }
  write_manifest(out, command, config, files);
  if (density_failed) {
    throw DensityError("marks fail the density check at epsilon = " +
                       format_double(config.run.epsilon));
  }
  return files;
}

void write_manifest(const fs::path& out, Command command, const ExperimentConfig& config,
                    const std::vector<std::string>& files) {
  std::ofstream f(out / "manifest.ini", std::ios::binary);
  if (!f) throw std::runtime_error("cannot write manifest in " + out.string());
  f << format_config(config) << "\n[manifest]\nversion = " << kArtifactVersion
    << "\ncommand = " << command_name(command) << "\nconfig_hash = " << hex(config_hash(config))
    << "\nfiles = ";
  for (std::size_t i = 0; i < files.size(); ++i) f << (i ? ", " : "") << files[i];
  f << '\n';
}

Manifest load_manifest(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot read manifest " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string text = ss.str();

  Manifest m{Command::kStatic, parse_config(text), {}};
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  boost::property_tree::ini_parser::read_ini(in, tree);
  const auto section = tree.get_child_optional("manifest");
  if (!section) throw ConfigError("manifest section missing");
  m.command = parse_command(section->get<std::string>("command", ""));
  const std::string hash = section->get<std::string>("config_hash", "");
  if (hash != hex(config_hash(m.config))) {
    throw ConfigError("manifest config hash does not match its config");
  }
  std::istringstream list(section->get<std::string>("files", ""));
  std::string name;
  while (std::getline(list, name, ',')) {
    const auto a = name.find_first_not_of(' ');
    if (a != std::string::npos) m.files.push_back(name.substr(a));
  }
  return m;
}

int exit_code_for(const std::exception& e) {
  if (dynamic_cast<const ConfigError*>(&e) || dynamic_cast<const InvalidArgument*>(&e)) return 2;
  if (dynamic_cast<const CflError*>(&e)) return 3;
  if (dynamic_cast<const DensityError*>(&e)) return 4;
  if (dynamic_cast<const NumericalError*>(&e)) return 5;
  return 1;
}

}  // namespace isaacs
