#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "isaacs/problem.hpp"

namespace isaacs {

struct DiscretizationConfig {
  double lower = -10.0;
  double upper = 10.0;
  std::size_t nodes = 2001;
  std::size_t intervals = 50;
  std::size_t block = 0;  // 0: round(sqrt(intervals))
  int quad_points = 3;
  std::string dt_policy = "cfl";  // cfl | fixed
  double dt = 0.0;                // used by the fixed policy
  std::size_t reference_nodes = 2001;
  double window = 2.0;  // gaps are measured on |x| <= window
};

struct RunConfig {
  std::string mode = "random";  // random | deterministic | both
  std::uint64_t seed = 0;
  std::size_t paths = 10000;
  std::size_t substeps = 4;
  std::size_t keep_paths = 0;
  std::size_t challengers = 0;
  std::size_t challenger_paths = 20000;
  std::size_t samples = 100;
  double epsilon = 0.5;
  std::vector<std::size_t> levels{25, 50, 100};
};

struct OutputConfig {
  std::string dir = "out";
};

/// Everything one experiment needs. Seeds are always explicit.
struct ExperimentConfig {
  CoefficientSpec coefficients;
  PayoffSpec payoff;
  PrioritySpec priority;
  std::vector<VectorXd> u_points;
  std::vector<VectorXd> v_points;
  double horizon = 0.5;
  double start_time = 0.0;
  double start_state = 0.0;
  DiscretizationConfig discretization;
  RunConfig run;
  OutputConfig output;

  ProblemSpec problem() const;
  std::size_t block_for(std::size_t intervals) const;
};

/// INI text, sections [coefficients] [payoff] [priority] [actions] [game]
/// [discretization] [run] [output]. Family parameters are keyed by name;
/// action sets are written "p1; p2; ..." with components split by commas.
/// Unknown sections or keys and missing required keys raise ConfigError.
/// A [manifest] section is accepted and ignored.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical INI; parse_config(format_config(c)) reproduces c exactly.
std::string format_config(const ExperimentConfig& config, bool with_output = true);

// FNV-1a over the canonical text without the output section.
std::uint64_t config_hash(const ExperimentConfig& config);

// The d = 1 bilinear benchmark as a config.
ExperimentConfig benchmark_config(PrioritySpec priority, std::uint64_t seed);

}  // namespace isaacs
