#pragma once

#include <cstddef>
#include <exception>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "isaacs/config.hpp"
#include "isaacs/csv.hpp"
#include "isaacs/pde.hpp"

namespace isaacs {

inline constexpr std::string_view kArtifactVersion = "0.1.0";

enum class Command { kStatic, kHamiltonian, kSchedule, kPde, kDp, kSimulate, kConverge };

std::string_view command_name(Command c);
Command parse_command(std::string_view name);

struct ConvergenceRow {
  std::size_t intervals = 0;
  std::size_t block = 0;
  double gap_random = 0.0;         // NaN when not run
  double gap_deterministic = 0.0;  // NaN when not run
  double ordering_violation = 0.0;  // max over DP runs of V_minus - V_plus
  double dp_value = 0.0;            // random-mode value at (s, x0), else deterministic
  double mc_mean = 0.0;             // NaN when no paths
  double mc_std_error = 0.0;
};

struct ConvergenceTable {
  double reference_dx = 0.0;
  double reference_dt = 0.0;
  std::vector<ConvergenceRow> rows;

  CsvTable csv() const;
};

/// Per level n: dp values against one fixed PDE reference (mixed Hamiltonian,
/// reference_nodes on [lower, upper], CFL dt) in sup norm over the nodes with
/// |x| <= window, at every partition time for the random mode and at the
/// sub-grid times for the deterministic mode, plus a Monte Carlo run of the
/// random-mode saddle profile when paths > 0. Needs two or more levels.
ConvergenceTable run_converge(const ExperimentConfig& config);

// Sup over dp's slices and nodes with |x| <= window of |dp - ref|; ref is read
// at the same time, by linear interpolation unless the grids coincide.
double window_gap(const ValueField& dp, const ValueField& ref, double window);

/// Runs one subcommand, writing its CSV files and manifest.ini into `out`.
/// Returns the CSV file names. DensityError is raised after the schedule
/// files are written when the marks fail the density check.
std::vector<std::string> run_command(Command command, const ExperimentConfig& config,
                                     const std::filesystem::path& out);

struct Manifest {
  Command command;
  ExperimentConfig config;
  std::vector<std::string> files;
};

void write_manifest(const std::filesystem::path& out, Command command,
                    const ExperimentConfig& config, const std::vector<std::string>& files);
Manifest load_manifest(const std::filesystem::path& path);

// 0 ok, 2 config, 3 CFL, 4 density, 5 numerical, 1 anything else.
int exit_code_for(const std::exception& e);

}  // namespace isaacs
