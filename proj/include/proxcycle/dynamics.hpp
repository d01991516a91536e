#ifndef PROXCYCLE_DYNAMICS_HPP
#define PROXCYCLE_DYNAMICS_HPP

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "proxcycle/penalty.hpp"
#include "proxcycle/sets.hpp"
#include "proxcycle/state.hpp"

namespace proxcycle {

/// One agent's update operator: exact projection onto a constraint set,
/// or a proximal step on a penalty.
struct AgentOperator {
  std::string label;
  std::variant<ConvexSet, Penalty> op;

  static AgentOperator projection(std::string label, ConvexSet set) {
    return AgentOperator{std::move(label), std::move(set)};
  }

  static AgentOperator proximal(std::string label, Penalty penalty) {
    return AgentOperator{std::move(label), std::move(penalty)};
  }

  bool is_projection() const { return op.index() == 0; }

  std::size_t dim() const {
    return is_projection() ? std::get<ConvexSet>(op).dim() : std::get<Penalty>(op).dim();
  }

  // Projection operators ignore lambda.
  StateVector apply(const StateVector& x, double lambda) const {
    if (is_projection()) return std::get<ConvexSet>(op).project(x);
    return std::get<Penalty>(op).prox(lambda, x);
  }

  bool operator==(const AgentOperator& other) const = default;
};

/// Per-round step-size schedule lambda_k, indexed from k = 1.
class Schedule {
 public:
  enum class Kind { Constant, Harmonic, PolyDecay };

  static Schedule constant(double lambda0) { return Schedule(Kind::Constant, lambda0, 0.0); }
  static Schedule harmonic(double lambda0) { return Schedule(Kind::Harmonic, lambda0, 1.0); }

  // lambda_k = lambda0 / k^p, p in (0.5, 1].
  static Schedule poly_decay(double lambda0, double p) {
    if (!(p > 0.5 && p <= 1.0)) throw value_error("PolyDecay requires p in (0.5, 1]");
    return Schedule(Kind::PolyDecay, lambda0, p);
  }

  Kind kind() const { return kind_; }
  double lambda0() const { return lambda0_; }
  double exponent() const { return p_; }

  double at(std::size_t k) const {
    switch (kind_) {
      case Kind::Constant: return lambda0_;
      case Kind::Harmonic: return lambda0_ / static_cast<double>(k);
      default: return lambda0_ / std::pow(static_cast<double>(k), p_);
    }
  }

  // True when sum lambda_k = inf and sum lambda_k^2 < inf hold.
  bool diminishing() const { return kind_ != Kind::Constant; }

 private:
  Schedule(Kind kind, double lambda0, double p) : kind_(kind), lambda0_(lambda0), p_(p) {
    if (!(lambda0 > 0.0)) throw value_error("Schedule requires lambda0 > 0");
  }

  Kind kind_;
  double lambda0_;
  double p_;
};

struct StopRule {
  std::size_t max_rounds;
  double step_tol;
  std::optional<double> energy_tol;

  StopRule(std::size_t max_rounds_, double step_tol_,
           std::optional<double> energy_tol_ = std::nullopt)
      : max_rounds(max_rounds_), step_tol(step_tol_), energy_tol(energy_tol_) {
    if (max_rounds < 1) throw value_error("StopRule requires max_rounds >= 1");
    if (step_tol < 0.0) throw value_error("StopRule requires step_tol >= 0");
    if (energy_tol && *energy_tol < 0.0) throw value_error("energy_tol must be >= 0");
  }
};

enum class Termination { StepTol, EnergyTol, MaxRounds };

inline std::string to_string(Termination t) {
  switch (t) {
    case Termination::StepTol: return "step_tol";
    case Termination::EnergyTol: return "energy_tol";
    default: return "max_rounds";
  }
}

/// Iterate record x^(0) ... x^(K) with per-round diagnostics.
struct Trajectory {
  std::vector<StateVector> states;
  std::vector<double> lambdas;
  std::vector<double> step_norms;
  std::vector<double> energies;  // empty when no energy attached
  std::vector<std::vector<StateVector>> per_agent_states;  // empty when not recorded
  Termination termination = Termination::MaxRounds;
  bool projection_only = false;

  std::size_t rounds() const { return step_norms.size(); }
  const StateVector& final_state() const { return states.back(); }
};

/// Thrown when an iterate goes non-finite; carries whatever was recorded.
class divergence_error : public error {
 public:
  divergence_error(std::string what, Trajectory partial)
      : error(std::move(what)), partial_(std::move(partial)) {}
  const Trajectory& partial_trajectory() const { return partial_; }

 private:
  Trajectory partial_;
};

namespace detail {

inline void check_ops(const std::vector<AgentOperator>& ops, const StateVector& x) {
  if (ops.empty()) throw value_error("at least one agent operator required");
  for (const auto& op : ops) {
    if (op.dim() != x.dim()) throw dimension_error(x.dim(), op.dim());
  }
}

inline bool all_finite(const StateVector& x) {
  for (double c : x.coords())
    if (!std::isfinite(c)) return false;
  return true;
}

}  // namespace detail

struct RoundResult {
  StateVector final_state;
  std::vector<StateVector> intermediates;  // state after each agent, in order
};

/// One interaction round: apply each operator in list order.
inline RoundResult compose_round(const std::vector<AgentOperator>& ops, const StateVector& x,
                                 double lambda) {
  detail::check_ops(ops, x);
  bool any_prox = false;
  for (const auto& op : ops) any_prox = any_prox || !op.is_projection();
  if (any_prox && !(lambda > 0.0))
    throw value_error("lambda must be > 0 when proximal operators are present");

  std::vector<StateVector> intermediates;
  intermediates.reserve(ops.size());
  StateVector cur = x;
  for (const auto& op : ops) {
    cur = op.apply(cur, lambda);
    intermediates.push_back(cur);
  }
  return RoundResult{std::move(cur), std::move(intermediates)};
}

/// ||T(x) - x|| for the composed round operator; zero characterizes
/// states stable under further interaction.
inline double fixed_point_residual(const std::vector<AgentOperator>& ops, const StateVector& x,
                                   double lambda) {
  return distance(compose_round(ops, x, lambda).final_state, x);
}

enum class PerAgentRecording { Auto, On, Off };

struct IterateOptions {
  PerAgentRecording per_agent = PerAgentRecording::Auto;  // Auto: on for dim <= 16
};

/// Run the cyclic dynamics x^(k+1) = T_m(...T_1(x^(k))...) with lambda_k
/// from the schedule until a stop criterion fires. Deterministic.
inline Trajectory iterate(const std::vector<AgentOperator>& ops, const StateVector& x0,
                          const Schedule& sched, const StopRule& stop,
                          const std::optional<EnergyFunction>& energy = std::nullopt,
                          const IterateOptions& options = {}) {
  detail::check_ops(ops, x0);
  if (!detail::all_finite(x0)) throw value_error("x0 must be finite");
  if (energy && energy->dim() != x0.dim()) throw dimension_error(x0.dim(), energy->dim());

  const bool record_agents = options.per_agent == PerAgentRecording::On ||
                             (options.per_agent == PerAgentRecording::Auto && x0.dim() <= 16);

  Trajectory traj;
  traj.projection_only = true;
  for (const auto& op : ops) traj.projection_only = traj.projection_only && op.is_projection();
  traj.states.push_back(x0);
  if (energy) traj.energies.push_back(energy->eval(x0));

  for (std::size_t k = 1; k <= stop.max_rounds; ++k) {
    const double lambda = sched.at(k);
    RoundResult round = [&] {
      try {
        return compose_round(ops, traj.states.back(), lambda);
      } catch (const value_error&) {
        // non-finite arithmetic inside an operator (preconditions were
        // validated up front)
        throw divergence_error("non-finite state at round " + std::to_string(k),
                               std::move(traj));
      }
    }();
    if (!detail::all_finite(round.final_state)) {
      throw divergence_error("non-finite state at round " + std::to_string(k), std::move(traj));
    }
    const double step = distance(round.final_state, traj.states.back());
    traj.states.push_back(std::move(round.final_state));
    traj.lambdas.push_back(lambda);
    traj.step_norms.push_back(step);
    if (record_agents) traj.per_agent_states.push_back(std::move(round.intermediates));

    if (energy) {
      const double e = energy->eval(traj.states.back());
      traj.energies.push_back(e);
      if (stop.energy_tol &&
          std::abs(e - traj.energies[traj.energies.size() - 2]) < *stop.energy_tol) {
        traj.termination = Termination::EnergyTol;
        return traj;
      }
    }
    if (step < stop.step_tol) {
      traj.termination = Termination::StepTol;
      return traj;
    }
  }
  traj.termination = Termination::MaxRounds;
  return traj;
}

/// Fejer monotonicity report: per-reference worst increase of the
/// distance ||x^(k) - a|| along the trajectory.
struct FejerReport {
  std::vector<double> max_increase;  // one entry per reference
  double worst = 0.0;
  bool pass = false;
  bool informational = false;  // proximal dynamics: not asserted, reported only
};

inline constexpr double kFejerTol = 1e-12;
inline constexpr double kReferenceMembershipTol = 1e-9;

/// References must lie in the intersection of the given sets (checked at
/// tol 1e-9 when sets are provided). For projection-only trajectories a
/// pass requires max increase <= 1e-12; proximal runs are informational.
inline FejerReport fejer_report(const Trajectory& traj,
                                const std::vector<StateVector>& references,
                                const std::vector<ConvexSet>& sets = {}) {
  if (references.empty()) throw value_error("fejer_report requires at least one reference");
  for (const auto& a : references) {
    for (const auto& s : sets) {
      if (!s.contains(a, kReferenceMembershipTol))
        throw value_error("reference point fails membership in a constraint set");
    }
  }

  FejerReport report;
  report.informational = !traj.projection_only;
  for (const auto& a : references) {
    double max_inc = 0.0;
    double prev = distance(traj.states.front(), a);
    for (std::size_t k = 1; k < traj.states.size(); ++k) {
      const double d = distance(traj.states[k], a);
      max_inc = std::max(max_inc, d - prev);
      prev = d;
    }
    report.max_increase.push_back(max_inc);
    report.worst = std::max(report.worst, max_inc);
  }
  report.pass = report.worst <= kFejerTol;
  return report;
}

/// Distance of the final iterate to each constraint set.
struct ClusterPointReport {
  std::vector<double> distances;
  bool pass = false;
};

inline ClusterPointReport cluster_point_check(const Trajectory& traj,
                                              const std::vector<ConvexSet>& sets, double tol) {
  if (tol < 0.0) throw value_error("cluster_point_check requires tol >= 0");
  ClusterPointReport report;
  report.pass = true;
  for (const auto& s : sets) {
    const double d = s.distance(traj.final_state());
    report.distances.push_back(d);
    report.pass = report.pass && d <= tol;
  }
  return report;
}

}  // namespace proxcycle

#endif  // PROXCYCLE_DYNAMICS_HPP
