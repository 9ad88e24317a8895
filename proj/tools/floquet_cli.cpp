#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <vector>

#include "floquet/run.hpp"

namespace {

struct Flags {
  std::string config;
  std::string out;
  int workers = -1;
  std::vector<std::string> sets;
};

void add_flags(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "YAML run config");
  sub->add_option("--out", f.out, "output directory");
  sub->add_option("--workers", f.workers, "worker threads (0 = all cores)")->check(CLI::NonNegativeNumber);
  sub->add_option("--set", f.sets, "override, key=value (repeatable)")->allow_extra_args(false);
}

floquet::RunConfig resolve(const std::string& task, const Flags& f) {
  floquet::RunConfig c;
  if (!f.config.empty()) c = floquet::load_config(f.config);
  if (task != "validate") c.task = task;
  for (const auto& kv : f.sets) floquet::apply_override(c, kv);
  if (!f.out.empty()) c.out = f.out;
  if (f.workers >= 0) c.workers = f.workers;
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet non-Bloch band theory: GBZ solver and lattice oracle"};
  app.set_version_flag("--version", std::string(floquet::kToolName) + " " + floquet::kToolVersion);
  app.require_subcommand(1);

  Flags flags;
  const std::vector<std::pair<std::string, std::string>> cmds{
      {"gbz", "Floquet (or static) GBZ and its spectrum"},
      {"agbz", "auxiliary GBZ of one Floquet zone index"},
      {"spectrum", "periodic-boundary spectrum of h_F"},
      {"oracle", "exact diagonalization of the finite-chain Floquet operator"},
      {"phase-diagram", "eta over a two-parameter grid"},
      {"dynamics", "wavepacket norm growth and Lyapunov estimate"},
      {"critical-period", "first period at which PT symmetry breaks"},
      {"validate", "static config checks"},
  };
  for (const auto& [name, help] : cmds) add_flags(app.add_subcommand(name, help), flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  const std::string task = app.get_subcommands().front()->get_name();

  floquet::RunConfig cfg;
  try {
    cfg = resolve(task, flags);
  } catch (const floquet::ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }

  if (task == "validate") {
    const auto problems = floquet::validate(cfg);
    for (const auto& p : problems) std::cout << p << '\n';
    if (problems.empty()) std::cout << "ok\n";
    return problems.empty() ? 0 : 2;
  }

  const floquet::RunResult r = floquet::run(cfg);
  if (r.exit_code != 0) {
    std::cerr << "error: " << r.message << '\n';
    return r.exit_code;
  }
  std::cout << r.summary.dump() << '\n';
  return 0;
}
