// Experiment harness: one subcommand per run, CSV tables plus manifest.ini
// in the output directory.

#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "isaacs/config.hpp"
#include "isaacs/errors.hpp"
#include "isaacs/experiment.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::vector<std::size_t> levels;
};

void add_run_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "experiment config (INI)")->required();
  sub->add_option("--out", f.out, "output directory (overrides [output] dir)");
  sub->add_option("--seed", f.seed, "master seed (overrides [run] seed)");
  sub->add_option("--levels", f.levels, "refinement levels, comma separated")->delimiter(',');
}

int run(isaacs::Command cmd, const Flags& f) {
  isaacs::ExperimentConfig cfg = isaacs::load_config(f.config);
  if (f.seed) cfg.run.seed = *f.seed;
  if (!f.levels.empty()) cfg.run.levels = f.levels;
  if (!f.out.empty()) cfg.output.dir = f.out;
  const auto files = isaacs::run_command(cmd, cfg, cfg.output.dir);
  for (const auto& name : files) std::cout << cfg.output.dir << '/' << name << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discretized zero-sum stochastic games with informational priority"};
  app.require_subcommand(1);

  Flags flags;
  std::optional<isaacs::Command> chosen;
  for (auto cmd : {isaacs::Command::kStatic, isaacs::Command::kHamiltonian,
                   isaacs::Command::kSchedule, isaacs::Command::kPde, isaacs::Command::kDp,
                   isaacs::Command::kSimulate, isaacs::Command::kConverge}) {
    auto* sub = app.add_subcommand(std::string(isaacs::command_name(cmd)));
    add_run_flags(sub, flags);
    sub->callback([cmd, &chosen] { chosen = cmd; });
  }

  std::string manifest;
  std::string replay_out;
  auto* replay = app.add_subcommand("replay", "re-run a manifest.ini");
  replay->add_option("--manifest", manifest, "manifest written by an earlier run")->required();
  replay->add_option("--out", replay_out, "output directory (overrides the manifest's)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*replay) {
      isaacs::Manifest m = isaacs::load_manifest(manifest);
      if (!replay_out.empty()) m.config.output.dir = replay_out;
      const auto files = isaacs::run_command(m.command, m.config, m.config.output.dir);
      for (const auto& name : files) std::cout << m.config.output.dir << '/' << name << '\n';
      return 0;
    }
    return run(*chosen, flags);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return isaacs::exit_code_for(e);
  }
}
