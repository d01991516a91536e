#ifndef PROXCYCLE_RUNNER_HPP
#define PROXCYCLE_RUNNER_HPP

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "proxcycle/baselines.hpp"
#include "proxcycle/dynamics.hpp"
#include "proxcycle/scenario.hpp"

namespace proxcycle {

class io_error : public error {
 public:
  using error::error;
};

// 17 significant digits: round-trip exact for 64-bit floats.
inline std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline void write_trajectory_csv(const Trajectory& traj, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  const std::size_t dim = traj.states.front().dim();
  out << "round,lambda";
  for (std::size_t j = 0; j < dim; ++j) out << ",x" << (j + 1);
  out << ",step_norm,energy\n";
  for (std::size_t k = 0; k < traj.states.size(); ++k) {
    out << k << ",";
    if (k > 0) out << format_number(traj.lambdas[k - 1]);
    for (std::size_t j = 0; j < dim; ++j) out << "," << format_number(traj.states[k][j]);
    out << ",";
    if (k > 0) out << format_number(traj.step_norms[k - 1]);
    out << ",";
    if (!traj.energies.empty()) out << format_number(traj.energies[k]);
    out << "\n";
  }
}

inline void write_agents_csv(const Trajectory& traj, const std::vector<AgentOperator>& ops,
                             const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw io_error("cannot open " + path.string() + " for writing");
  const std::size_t dim = traj.states.front().dim();
  out << "round,agent_index,agent_label";
  for (std::size_t j = 0; j < dim; ++j) out << ",x" << (j + 1);
  out << "\n";
  for (std::size_t k = 0; k < traj.per_agent_states.size(); ++k) {
    const auto& round = traj.per_agent_states[k];
    for (std::size_t i = 0; i < round.size(); ++i) {
      out << (k + 1) << "," << (i + 1) << "," << ops[i].label;
      for (std::size_t j = 0; j < dim; ++j) out << "," << format_number(round[i][j]);
      out << "\n";
    }
  }
}

struct RunOptions {
  std::optional<std::size_t> max_rounds_override;
  bool per_agent_csv = false;
  bool quiet = false;
};

struct RunSummary {
  std::string scenario_name;
  StateVector final_state{std::vector<double>{0.0}};
  std::size_t rounds = 0;
  std::string termination;
  double terminal_lambda = 0.0;
  double fixed_point_residual = 0.0;
  std::optional<double> final_energy;
  std::optional<bool> expected_met;
  std::optional<double> expected_distance;
  // Largest displacement between consecutive agent states inside the
  // final round. A non-vanishing amplitude with a vanishing round-level
  // step norm signals oscillation without a common feasible point.
  double oscillation_amplitude = 0.0;
  bool non_convergent_oscillation = false;
  bool diverged = false;

  bool success() const { return !diverged && expected_met.value_or(true); }
};

namespace detail {

inline std::optional<EnergyFunction> scenario_energy(const Scenario& s) {
  if (s.projection_only()) return std::nullopt;
  for (const auto& a : s.agents)
    if (a.is_projection()) return std::nullopt;  // mixed: indicator energies are +inf off-set
  return EnergyFunction(s.penalty_terms());
}

inline double intra_round_amplitude(const std::vector<AgentOperator>& ops, const StateVector& x,
                                    double lambda) {
  const RoundResult r = compose_round(ops, x, lambda);
  double amp = 0.0;
  const StateVector* prev = &x;
  for (const auto& s : r.intermediates) {
    amp = std::max(amp, distance(s, *prev));
    prev = &s;
  }
  return amp;
}

inline RunSummary summarize(const Scenario& s, const Trajectory& traj, bool diverged) {
  RunSummary summary;
  summary.scenario_name = s.name;
  summary.final_state = traj.final_state();
  summary.rounds = traj.rounds();
  summary.termination = diverged ? "divergence" : to_string(traj.termination);
  summary.terminal_lambda = traj.lambdas.empty() ? s.schedule.at(1) : traj.lambdas.back();
  summary.diverged = diverged;
  if (!diverged) {
    summary.fixed_point_residual =
        proxcycle::fixed_point_residual(s.agents, traj.final_state(), summary.terminal_lambda);
    summary.oscillation_amplitude =
        intra_round_amplitude(s.agents, traj.final_state(), summary.terminal_lambda);
    // Stationary round map but infeasible final state: the hard-constraint
    // signature of an empty intersection. Prox agents move within a round
    // by design, so the flag is restricted to projection-only systems.
    if (traj.projection_only && summary.fixed_point_residual <= 1e-9) {
      for (const auto& set : s.projection_sets()) {
        if (set.distance(traj.final_state()) > 1e-9) {
          summary.non_convergent_oscillation = true;
          break;
        }
      }
    }
    if (!traj.energies.empty()) summary.final_energy = traj.energies.back();
    if (s.expected) {
      summary.expected_distance = distance(traj.final_state(), s.expected->point);
      summary.expected_met = *summary.expected_distance <= s.expected->tol;
    }
  }
  return summary;
}

inline nlohmann::json summary_to_json(const RunSummary& s) {
  nlohmann::json j;
  j["scenario"] = s.scenario_name;
  j["final_state"] = s.final_state.coords();
  j["rounds"] = s.rounds;
  j["termination"] = s.termination;
  j["terminal_lambda"] = s.terminal_lambda;
  j["fixed_point_residual"] = s.fixed_point_residual;
  j["oscillation_amplitude"] = s.oscillation_amplitude;
  j["non_convergent_oscillation"] = s.non_convergent_oscillation;
  j["diverged"] = s.diverged;
  if (s.final_energy) j["final_energy"] = *s.final_energy;
  if (s.expected_met) {
    j["expected"] = {{"met", *s.expected_met}, {"distance", *s.expected_distance}};
  }
  return j;
}

}  // namespace detail

/// Execute a scenario, writing trajectory.csv (plus trajectory_agents.csv
/// when requested) and summary.json under out_dir. On divergence the
/// partial trajectory is still written.
inline RunSummary run_scenario(const Scenario& scenario, const std::filesystem::path& out_dir,
                               const RunOptions& options = {}) {
  Scenario s = scenario;
  if (options.max_rounds_override)
    s.stop = StopRule(*options.max_rounds_override, s.stop.step_tol, s.stop.energy_tol);

  std::filesystem::create_directories(out_dir);
  IterateOptions it_opts;
  if (options.per_agent_csv) it_opts.per_agent = PerAgentRecording::On;

  Trajectory traj;
  bool diverged = false;
  try {
    traj = iterate(s.agents, s.x0, s.schedule, s.stop, detail::scenario_energy(s), it_opts);
  } catch (const divergence_error& e) {
    traj = e.partial_trajectory();
    diverged = true;
  }

  write_trajectory_csv(traj, out_dir / "trajectory.csv");
  if (options.per_agent_csv) write_agents_csv(traj, s.agents, out_dir / "trajectory_agents.csv");

  RunSummary summary = detail::summarize(s, traj, diverged);
  std::ofstream out(out_dir / "summary.json");
  if (!out) throw io_error("cannot open summary.json for writing");
  out << detail::summary_to_json(summary).dump(2) << "\n";
  return summary;
}

// ---------------------------------------------------------------------------
// Invariant check battery.

struct CheckItem {
  std::string name;
  bool pass = false;
  bool informational = false;
  std::string detail;
};

struct CheckReport {
  std::vector<CheckItem> items;

  bool all_pass() const {
    for (const auto& item : items)
      if (!item.informational && !item.pass) return false;
    return true;
  }
};

inline CheckReport check_scenario(const Scenario& s) {
  CheckReport report;
  const Trajectory traj = iterate(s.agents, s.x0, s.schedule, s.stop, detail::scenario_energy(s));
  const double terminal_lambda = traj.lambdas.empty() ? s.schedule.at(1) : traj.lambdas.back();
  const std::vector<ConvexSet> sets = s.projection_sets();

  if (!s.feasible_refs.empty()) {
    const FejerReport fejer = fejer_report(traj, s.feasible_refs, sets);
    std::ostringstream os;
    os << "max distance increase " << fejer.worst;
    report.items.push_back({"fejer-monotonicity", fejer.pass, fejer.informational, os.str()});

    if (traj.projection_only) {
      double worst = 0.0;
      for (const auto& ref : s.feasible_refs)
        worst = std::max(worst, fixed_point_residual(s.agents, ref, terminal_lambda));
      std::ostringstream os2;
      os2 << "max residual " << worst;
      report.items.push_back({"invariant-set-fixedness", worst <= 1e-12, false, os2.str()});
    }
  }

  if (!sets.empty()) {
    const ClusterPointReport cluster = cluster_point_check(traj, sets, 1e-6);
    const bool meaningful = traj.termination == Termination::StepTol;
    std::ostringstream os;
    os << "max set distance "
       << (cluster.distances.empty()
               ? 0.0
               : *std::max_element(cluster.distances.begin(), cluster.distances.end()))
       << (meaningful ? "" : " (not step_tol-terminated)");
    report.items.push_back({"cluster-point", meaningful && cluster.pass, false, os.str()});
  }

  if (s.all_affine_quadratic() && s.dim <= 3) {
    // Limit-vs-minimizer check against the brute-force grid oracle.
    const EnergyFunction f(s.penalty_terms());
    const StateVector& final = traj.final_state();
    std::vector<double> lo(s.dim), hi(s.dim);
    for (std::size_t j = 0; j < s.dim; ++j) {
      lo[j] = final[j] - 1.0;
      hi[j] = final[j] + 1.0;
    }
    const GridResult grid = grid_minimize(f, StateVector(lo), StateVector(hi), 401);
    const double cell = 2.0 / 400.0;
    const double tol = std::max(s.expected ? s.expected->tol : 0.0,
                                2.0 * cell * std::sqrt(static_cast<double>(s.dim)));
    const double d = distance(final, grid.point);
    std::ostringstream os;
    os << "distance to grid minimizer " << d << " (tol " << tol << ")";
    report.items.push_back({"minimizer-vs-grid-oracle", d <= tol, false, os.str()});
  }

  {
    bool all_identical = true;
    for (const auto& a : s.agents) all_identical = all_identical && a.op == s.agents.front().op;
    if (all_identical && s.agents.size() > 1) {
      std::mt19937_64 rng(20240801);
      std::uniform_real_distribution<double> dist(-5.0, 5.0);
      double worst = 0.0;
      for (int t = 0; t < 20; ++t) {
        std::vector<double> c(s.dim);
        for (auto& v : c) v = dist(rng);
        const StateVector x(c);
        const StateVector composed = compose_round(s.agents, x, terminal_lambda).final_state;
        const StateVector single = s.agents.front().apply(x, terminal_lambda);
        worst = std::max(worst, distance(composed, single));
      }
      std::ostringstream os;
      os << "max composed-vs-single gap " << worst;
      report.items.push_back({"degenerate-collapse", worst <= 1e-15, false, os.str()});
    }
  }

  return report;
}

// ---------------------------------------------------------------------------
// Baseline comparison.

struct CompareRow {
  std::string label;
  StateVector point{std::vector<double>{0.0}};
  double energy = 0.0;
  double distance_to_factored = 0.0;
  std::vector<double> per_agent_penalties;
  bool differs_from_factored = false;
};

struct CompareReport {
  std::vector<CompareRow> rows;
  double tol = 0.0;
};

inline CompareReport compare_scenario(const Scenario& s) {
  if (!s.baselines.monolithic && !s.baselines.averaging && !s.baselines.grid_oracle)
    throw value_error("compare requires at least one baseline flag");

  const std::vector<Penalty> terms = s.penalty_terms();
  const EnergyFunction base_energy(terms);

  const Trajectory traj = iterate(s.agents, s.x0, s.schedule, s.stop, detail::scenario_energy(s));
  const StateVector factored = traj.final_state();

  CompareReport report;
  report.tol = s.expected ? s.expected->tol : 1e-6;

  auto add_row = [&](std::string label, StateVector point) {
    CompareRow row;
    row.label = std::move(label);
    row.energy = base_energy.eval(point);
    row.distance_to_factored = distance(point, factored);
    for (const auto& t : terms) row.per_agent_penalties.push_back(t.eval(point));
    row.differs_from_factored = row.distance_to_factored > report.tol;
    row.point = std::move(point);
    report.rows.push_back(std::move(row));
  };

  add_row("factored", factored);
  if (s.baselines.monolithic) {
    for (double mu : s.baselines.mu_values) {
      std::ostringstream label;
      label << "monolithic mu=" << mu;
      add_row(label.str(), monolithic_minimizer(EnergyFunction(terms, mu)));
    }
  }
  if (s.baselines.averaging) add_row("averaging", averaging_baseline(terms));
  if (s.baselines.grid_oracle) {
    if (s.dim > 3) throw oracle_scale_error("grid oracle baseline requires dim <= 3");
    std::vector<double> lo(s.dim), hi(s.dim);
    for (std::size_t j = 0; j < s.dim; ++j) {
      lo[j] = factored[j] - 1.0;
      hi[j] = factored[j] + 1.0;
    }
    add_row("grid-oracle", grid_minimize(base_energy, StateVector(lo), StateVector(hi), 401).point);
  }
  return report;
}

inline std::string render_point(const StateVector& x, int precision = 6) {
  std::ostringstream os;
  os << std::setprecision(precision) << "(";
  for (std::size_t j = 0; j < x.dim(); ++j) {
    if (j) os << ", ";
    os << x[j];
  }
  os << ")";
  return os.str();
}

inline std::string render_compare(const CompareReport& report) {
  std::vector<std::vector<std::string>> cells;
  cells.push_back({"row", "point", "energy F", "dist to factored", "per-agent penalties", ""});
  for (const auto& row : report.rows) {
    std::ostringstream energy, dist, pens;
    energy << std::setprecision(9) << row.energy;
    dist << std::setprecision(9) << row.distance_to_factored;
    pens << std::setprecision(6) << "[";
    for (std::size_t i = 0; i < row.per_agent_penalties.size(); ++i) {
      if (i) pens << ", ";
      pens << row.per_agent_penalties[i];
    }
    pens << "]";
    cells.push_back({row.label, render_point(row.point), energy.str(), dist.str(), pens.str(),
                     row.differs_from_factored ? "DIFFERS" : ""});
  }
  std::vector<std::size_t> widths(cells.front().size(), 0);
  for (const auto& row : cells)
    for (std::size_t c = 0; c < row.size(); ++c) widths[c] = std::max(widths[c], row[c].size());
  std::ostringstream os;
  for (const auto& row : cells) {
    for (std::size_t c = 0; c < row.size(); ++c)
      os << std::left << std::setw(static_cast<int>(widths[c]) + 2) << row[c];
    os << "\n";
  }
  return os.str();
}

inline nlohmann::json compare_to_json(const CompareReport& report) {
  nlohmann::json j;
  j["tol"] = report.tol;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : report.rows) {
    j["rows"].push_back({{"label", row.label},
                         {"point", row.point.coords()},
                         {"energy", row.energy},
                         {"distance_to_factored", row.distance_to_factored},
                         {"per_agent_penalties", row.per_agent_penalties},
                         {"differs_from_factored", row.differs_from_factored}});
  }
  return j;
}

}  // namespace proxcycle

#endif  // PROXCYCLE_RUNNER_HPP
