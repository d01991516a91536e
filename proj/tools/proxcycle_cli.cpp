// Command-line driver: run scenarios, check invariants, compare baselines.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "proxcycle/runner.hpp"
#include "proxcycle/scenario.hpp"

namespace {

using namespace proxcycle;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw io_error("cannot open scenario file " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

Scenario apply_overrides(Scenario s, std::optional<std::size_t> max_rounds) {
  if (max_rounds) s.stop = StopRule(*max_rounds, s.stop.step_tol, s.stop.energy_tol);
  return s;
}

int do_run(const Scenario& scenario, const std::string& out_dir, bool per_agent, bool quiet) {
  RunOptions options;
  options.per_agent_csv = per_agent;
  options.quiet = quiet;
  const RunSummary summary = run_scenario(scenario, out_dir, options);
  if (!quiet) {
    std::cout << "scenario:    " << summary.scenario_name << "\n"
              << "final state: " << render_point(summary.final_state, 12) << "\n"
              << "rounds:      " << summary.rounds << "\n"
              << "termination: " << summary.termination << "\n"
              << "fp residual: " << summary.fixed_point_residual << "\n";
    if (summary.final_energy) std::cout << "energy:      " << *summary.final_energy << "\n";
    if (summary.expected_met) {
      std::cout << "expected:    " << (*summary.expected_met ? "met" : "NOT met")
                << " (distance " << *summary.expected_distance << ")\n";
    }
    if (summary.non_convergent_oscillation) {
      std::cout << "warning:     non-convergent oscillation, intra-round amplitude "
                << summary.oscillation_amplitude << " (empty intersection?)\n";
    }
    std::cout << "outputs:     " << out_dir << "\n";
  }
  return summary.success() ? EXIT_SUCCESS : EXIT_FAILURE;
}

int do_check(const Scenario& scenario, bool quiet) {
  const CheckReport report = check_scenario(scenario);
  if (!quiet) {
    for (const auto& item : report.items) {
      std::cout << (item.informational ? "INFO" : (item.pass ? "PASS" : "FAIL")) << "  "
                << item.name << "  (" << item.detail << ")\n";
    }
  }
  return report.all_pass() ? EXIT_SUCCESS : EXIT_FAILURE;
}

int do_compare(const Scenario& scenario, bool quiet) {
  const CompareReport report = compare_scenario(scenario);
  if (!quiet) std::cout << render_compare(report);
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cyclic projection/proximal multi-agent dynamics"};
  app.require_subcommand(1);
  app.fallthrough();  // accept --quiet after the subcommand

  std::string file;
  std::string builtin_name;
  std::string out_dir = "out";
  std::optional<std::size_t> max_rounds;
  bool per_agent = false;
  bool quiet = false;

  app.add_flag("--quiet", quiet, "suppress console output");

  auto add_max_rounds = [&](CLI::App* cmd) {
    cmd->add_option("--max-rounds", max_rounds, "override the scenario's max_rounds");
  };

  CLI::App* run = app.add_subcommand("run", "run a scenario and write trajectory/summary");
  run->add_option("file", file, "scenario file")->required();
  run->add_option("--out", out_dir, "output directory");
  run->add_flag("--per-agent", per_agent, "also write per-agent intermediate states CSV");
  add_max_rounds(run);

  CLI::App* check = app.add_subcommand("check", "run the invariant check battery");
  check->add_option("file", file, "scenario file")->required();
  add_max_rounds(check);

  CLI::App* compare = app.add_subcommand("compare", "compare factored dynamics with baselines");
  compare->add_option("file", file, "scenario file")->required();
  add_max_rounds(compare);

  CLI::App* builtin = app.add_subcommand("builtin", "run a built-in scenario");
  builtin->add_option("name", builtin_name, "one of: paper-example, von-neumann-lines, "
                                            "identical-agents, parallel-planes")
      ->required();
  builtin->add_option("--out", out_dir, "output directory");
  builtin->add_flag("--per-agent", per_agent, "also write per-agent intermediate states CSV");
  add_max_rounds(builtin);

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed())
      return do_run(apply_overrides(parse_scenario(read_file(file)), max_rounds), out_dir,
                    per_agent, quiet);
    if (check->parsed())
      return do_check(apply_overrides(parse_scenario(read_file(file)), max_rounds), quiet);
    if (compare->parsed())
      return do_compare(apply_overrides(parse_scenario(read_file(file)), max_rounds), quiet);
    if (builtin->parsed())
      return do_run(apply_overrides(builtin_scenario(builtin_name), max_rounds), out_dir,
                    per_agent, quiet);
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
