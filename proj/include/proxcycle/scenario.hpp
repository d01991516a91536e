#ifndef PROXCYCLE_SCENARIO_HPP
#define PROXCYCLE_SCENARIO_HPP

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "proxcycle/dynamics.hpp"
#include "proxcycle/penalty.hpp"
#include "proxcycle/sets.hpp"
#include "proxcycle/state.hpp"

namespace proxcycle {

class scenario_error : public error {
 public:
  using error::error;
};

struct BaselineFlags {
  bool monolithic = false;
  std::vector<double> mu_values;
  bool averaging = false;
  bool grid_oracle = false;
};

struct ExpectedPoint {
  StateVector point;
  double tol;
};

/// One declarative experiment: agent roster, initial state, schedule,
/// stopping rule, and optional checks/baselines.
struct Scenario {
  std::string name;
  std::size_t dim = 0;
  std::vector<AgentOperator> agents;
  StateVector x0{std::vector<double>{0.0}};
  Schedule schedule = Schedule::harmonic(1.0);
  StopRule stop{1, 0.0};
  std::vector<StateVector> feasible_refs;
  BaselineFlags baselines;
  std::optional<ExpectedPoint> expected;

  bool projection_only() const {
    for (const auto& a : agents)
      if (!a.is_projection()) return false;
    return true;
  }

  /// Constraint sets of the projection agents, in order.
  std::vector<ConvexSet> projection_sets() const {
    std::vector<ConvexSet> sets;
    for (const auto& a : agents)
      if (a.is_projection()) sets.push_back(std::get<ConvexSet>(a.op));
    return sets;
  }

  /// Penalty view of the roster: prox agents contribute their penalty,
  /// projection agents the indicator of their set.
  std::vector<Penalty> penalty_terms() const {
    std::vector<Penalty> terms;
    for (const auto& a : agents) {
      if (a.is_projection())
        terms.push_back(Penalty::indicator(std::get<ConvexSet>(a.op)));
      else
        terms.push_back(std::get<Penalty>(a.op));
    }
    return terms;
  }

  bool all_affine_quadratic() const {
    for (const auto& a : agents) {
      if (a.is_projection()) return false;
      if (!std::holds_alternative<AffineQuadratic>(std::get<Penalty>(a.op).raw())) return false;
    }
    return true;
  }
};

namespace detail {

using json = nlohmann::json;

[[noreturn]] inline void fail(const std::string& path, const std::string& why) {
  throw scenario_error("scenario: " + path + ": " + why);
}

inline const json& field(const json& j, const std::string& path, const char* key) {
  if (!j.is_object()) fail(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) fail(path + "." + key, "missing required field");
  return *it;
}

inline double number_at(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  return j.get<double>();
}

inline StateVector vector_at(const json& j, const std::string& path, std::size_t dim) {
  if (!j.is_array() || j.empty()) fail(path, "expected a nonempty number list");
  std::vector<double> v;
  v.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) v.push_back(number_at(j[i], path + "[" + std::to_string(i) + "]"));
  if (dim != 0 && v.size() != dim)
    fail(path, "expected " + std::to_string(dim) + " entries, got " + std::to_string(v.size()));
  try {
    return StateVector(std::move(v));
  } catch (const error& e) {
    fail(path, e.what());
  }
}

inline ConvexSet set_at(const json& j, const std::string& path, std::size_t dim) {
  const std::string type = field(j, path, "type").get<std::string>();
  try {
    if (type == "hyperplane")
      return ConvexSet::hyperplane(vector_at(field(j, path, "a"), path + ".a", dim),
                                   number_at(field(j, path, "b"), path + ".b"));
    if (type == "halfspace")
      return ConvexSet::halfspace(vector_at(field(j, path, "a"), path + ".a", dim),
                                  number_at(field(j, path, "b"), path + ".b"));
    if (type == "box")
      return ConvexSet::box(vector_at(field(j, path, "lower"), path + ".lower", dim),
                            vector_at(field(j, path, "upper"), path + ".upper", dim));
    if (type == "ball")
      return ConvexSet::ball(vector_at(field(j, path, "center"), path + ".center", dim),
                             number_at(field(j, path, "radius"), path + ".radius"));
  } catch (const scenario_error&) {
    throw;
  } catch (const error& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown set type '" + type + "'");
}

inline Penalty penalty_at(const json& j, const std::string& path, std::size_t dim) {
  const std::string type = field(j, path, "type").get<std::string>();
  try {
    if (type == "affine_quadratic") {
      const double w = j.contains("w") ? number_at(j["w"], path + ".w") : 1.0;
      return Penalty::affine_quadratic(vector_at(field(j, path, "a"), path + ".a", dim),
                                       number_at(field(j, path, "b"), path + ".b"), w);
    }
    if (type == "indicator")
      return Penalty::indicator(set_at(field(j, path, "set"), path + ".set", dim));
    if (type == "squared_distance") {
      const double w = j.contains("w") ? number_at(j["w"], path + ".w") : 1.0;
      return Penalty::squared_distance(set_at(field(j, path, "set"), path + ".set", dim), w);
    }
  } catch (const scenario_error&) {
    throw;
  } catch (const error& e) {
    fail(path, e.what());
  }
  fail(path + ".type", "unknown penalty type '" + type + "'");
}

inline json set_to_json(const ConvexSet& s) {
  json j;
  std::visit(
      [&j](const auto& v) {
        using S = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<S, Hyperplane>) {
          j = {{"type", "hyperplane"}, {"a", v.a.coords()}, {"b", v.b}};
        } else if constexpr (std::is_same_v<S, Halfspace>) {
          j = {{"type", "halfspace"}, {"a", v.a.coords()}, {"b", v.b}};
        } else if constexpr (std::is_same_v<S, Box>) {
          j = {{"type", "box"}, {"lower", v.lower.coords()}, {"upper", v.upper.coords()}};
        } else {
          j = {{"type", "ball"}, {"center", v.center.coords()}, {"radius", v.radius}};
        }
      },
      s.raw());
  return j;
}

inline json penalty_to_json(const Penalty& p) {
  json j;
  std::visit(
      [&j](const auto& v) {
        using P = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<P, AffineQuadratic>) {
          j = {{"type", "affine_quadratic"}, {"a", v.a.coords()}, {"b", v.b}, {"w", v.w}};
        } else if constexpr (std::is_same_v<P, Indicator>) {
          j = {{"type", "indicator"}, {"set", set_to_json(v.set)}};
        } else {
          j = {{"type", "squared_distance"}, {"set", set_to_json(v.set)}, {"w", v.w}};
        }
      },
      p.raw());
  return j;
}

}  // namespace detail

/// Parse a scenario document. Every invariant is checked here; errors
/// carry the offending field path.
inline Scenario parse_scenario(const std::string& text) {
  namespace d = detail;
  d::json j;
  try {
    j = d::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw scenario_error(std::string("scenario: syntax error: ") + e.what());
  }

  Scenario s;
  s.name = d::field(j, "$", "name").get<std::string>();
  const double dim_raw = d::number_at(d::field(j, "$", "dim"), "$.dim");
  if (dim_raw < 1 || dim_raw != static_cast<std::size_t>(dim_raw))
    d::fail("$.dim", "expected a positive integer");
  s.dim = static_cast<std::size_t>(dim_raw);

  const auto& agents = d::field(j, "$", "agents");
  if (!agents.is_array() || agents.empty()) d::fail("$.agents", "expected a nonempty list");
  for (std::size_t i = 0; i < agents.size(); ++i) {
    const std::string path = "$.agents[" + std::to_string(i) + "]";
    const auto& a = agents[i];
    const std::string label = d::field(a, path, "label").get<std::string>();
    const std::string kind = d::field(a, path, "kind").get<std::string>();
    if (kind == "projection") {
      s.agents.push_back(AgentOperator::projection(
          label, d::set_at(d::field(a, path, "set"), path + ".set", s.dim)));
    } else if (kind == "prox") {
      s.agents.push_back(AgentOperator::proximal(
          label, d::penalty_at(d::field(a, path, "penalty"), path + ".penalty", s.dim)));
    } else {
      d::fail(path + ".kind", "expected \"projection\" or \"prox\"");
    }
  }

  s.x0 = d::vector_at(d::field(j, "$", "x0"), "$.x0", s.dim);

  {
    const auto& sch = d::field(j, "$", "schedule");
    const std::string type = d::field(sch, "$.schedule", "type").get<std::string>();
    const double l0 = d::number_at(d::field(sch, "$.schedule", "lambda0"), "$.schedule.lambda0");
    try {
      if (type == "constant")
        s.schedule = Schedule::constant(l0);
      else if (type == "harmonic")
        s.schedule = Schedule::harmonic(l0);
      else if (type == "poly")
        s.schedule = Schedule::poly_decay(l0, d::number_at(d::field(sch, "$.schedule", "p"),
                                                           "$.schedule.p"));
      else
        d::fail("$.schedule.type", "unknown schedule type '" + type + "'");
    } catch (const scenario_error&) {
      throw;
    } catch (const error& e) {
      d::fail("$.schedule", e.what());
    }
  }

  {
    const auto& st = d::field(j, "$", "stop");
    const double mr = d::number_at(d::field(st, "$.stop", "max_rounds"), "$.stop.max_rounds");
    if (mr < 1 || mr != static_cast<std::size_t>(mr))
      d::fail("$.stop.max_rounds", "expected a positive integer");
    std::optional<double> etol;
    if (st.contains("energy_tol")) etol = d::number_at(st["energy_tol"], "$.stop.energy_tol");
    try {
      s.stop = StopRule(static_cast<std::size_t>(mr),
                        d::number_at(d::field(st, "$.stop", "step_tol"), "$.stop.step_tol"), etol);
    } catch (const error& e) {
      d::fail("$.stop", e.what());
    }
  }

  if (j.contains("feasible_refs")) {
    const auto& refs = j["feasible_refs"];
    if (!refs.is_array()) d::fail("$.feasible_refs", "expected a list of number lists");
    for (std::size_t i = 0; i < refs.size(); ++i)
      s.feasible_refs.push_back(
          d::vector_at(refs[i], "$.feasible_refs[" + std::to_string(i) + "]", s.dim));
  }

  if (j.contains("baselines")) {
    const auto& b = j["baselines"];
    const std::string path = "$.baselines";
    if (!b.is_object()) d::fail(path, "expected an object");
    if (b.contains("monolithic")) s.baselines.monolithic = b["monolithic"].get<bool>();
    if (b.contains("mu_values")) {
      for (std::size_t i = 0; i < b["mu_values"].size(); ++i) {
        const double mu =
            d::number_at(b["mu_values"][i], path + ".mu_values[" + std::to_string(i) + "]");
        if (mu < 0.0) d::fail(path + ".mu_values", "mu values must be >= 0");
        s.baselines.mu_values.push_back(mu);
      }
    }
    if (b.contains("averaging")) s.baselines.averaging = b["averaging"].get<bool>();
    if (b.contains("grid_oracle")) s.baselines.grid_oracle = b["grid_oracle"].get<bool>();
    if (s.baselines.monolithic && s.baselines.mu_values.empty())
      d::fail(path + ".mu_values", "must be nonempty when monolithic is set");
  }

  if (j.contains("expected")) {
    const auto& e = j["expected"];
    const double tol = d::number_at(d::field(e, "$.expected", "tol"), "$.expected.tol");
    if (!(tol > 0.0)) d::fail("$.expected.tol", "expected a positive tolerance");
    s.expected = ExpectedPoint{
        d::vector_at(d::field(e, "$.expected", "point"), "$.expected.point", s.dim), tol};
  }

  return s;
}

inline std::string serialize(const Scenario& s) {
  namespace d = detail;
  d::json j;
  j["name"] = s.name;
  j["dim"] = s.dim;
  j["agents"] = d::json::array();
  for (const auto& a : s.agents) {
    d::json ja{{"label", a.label}};
    if (a.is_projection()) {
      ja["kind"] = "projection";
      ja["set"] = d::set_to_json(std::get<ConvexSet>(a.op));
    } else {
      ja["kind"] = "prox";
      ja["penalty"] = d::penalty_to_json(std::get<Penalty>(a.op));
    }
    j["agents"].push_back(std::move(ja));
  }
  j["x0"] = s.x0.coords();
  switch (s.schedule.kind()) {
    case Schedule::Kind::Constant:
      j["schedule"] = {{"type", "constant"}, {"lambda0", s.schedule.lambda0()}};
      break;
    case Schedule::Kind::Harmonic:
      j["schedule"] = {{"type", "harmonic"}, {"lambda0", s.schedule.lambda0()}};
      break;
    default:
      j["schedule"] = {{"type", "poly"},
                       {"lambda0", s.schedule.lambda0()},
                       {"p", s.schedule.exponent()}};
  }
  j["stop"] = {{"max_rounds", s.stop.max_rounds}, {"step_tol", s.stop.step_tol}};
  if (s.stop.energy_tol) j["stop"]["energy_tol"] = *s.stop.energy_tol;
  if (!s.feasible_refs.empty()) {
    j["feasible_refs"] = d::json::array();
    for (const auto& r : s.feasible_refs) j["feasible_refs"].push_back(r.coords());
  }
  if (s.baselines.monolithic || s.baselines.averaging || s.baselines.grid_oracle) {
    j["baselines"] = {{"monolithic", s.baselines.monolithic},
                      {"mu_values", s.baselines.mu_values},
                      {"averaging", s.baselines.averaging},
                      {"grid_oracle", s.baselines.grid_oracle}};
  }
  if (s.expected)
    j["expected"] = {{"point", s.expected->point.coords()}, {"tol", s.expected->tol}};
  return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// Built-in scenarios. Self-contained; no external files required.

inline std::vector<std::string> builtin_names() {
  return {"paper-example", "von-neumann-lines", "identical-agents", "parallel-planes"};
}

inline Scenario builtin_scenario(const std::string& name) {
  if (name == "paper-example") {
    // Three quadratic penalties on R^2 whose summed energy has the unique
    // minimizer (2/3, 2/3); cyclic prox under a diminishing schedule
    // converges there.
    Scenario s;
    s.name = "paper-example";
    s.dim = 2;
    s.agents = {
        AgentOperator::proximal("x1-target", Penalty::affine_quadratic({1.0, 0.0}, 1.0)),
        AgentOperator::proximal("x2-target", Penalty::affine_quadratic({0.0, 1.0}, 1.0)),
        AgentOperator::proximal("sum-target", Penalty::affine_quadratic({1.0, 1.0}, 1.0)),
    };
    s.x0 = StateVector{0.0, 0.0};
    s.schedule = Schedule::harmonic(1.0);
    s.stop = StopRule(1000000, 1e-10);
    s.baselines = BaselineFlags{true, {0.1, 1.0, 10.0}, true, true};
    s.expected = ExpectedPoint{StateVector{2.0 / 3.0, 2.0 / 3.0}, 1e-3};
    return s;
  }
  if (name == "von-neumann-lines") {
    // Alternating projections onto two lines through the origin meeting
    // at 0.3 rad; converges geometrically to the origin.
    const double theta = 0.3;
    Scenario s;
    s.name = "von-neumann-lines";
    s.dim = 2;
    s.agents = {
        AgentOperator::projection("horizontal-line",
                                  ConvexSet::hyperplane({0.0, 1.0}, 0.0)),
        AgentOperator::projection("tilted-line",
                                  ConvexSet::hyperplane({-std::sin(theta), std::cos(theta)}, 0.0)),
    };
    s.x0 = StateVector{1.0, 1.0};
    s.schedule = Schedule::constant(1.0);
    s.stop = StopRule(10000, 1e-12);
    s.feasible_refs = {StateVector{0.0, 0.0}};
    s.expected = ExpectedPoint{StateVector{0.0, 0.0}, 1e-6};
    return s;
  }
  if (name == "identical-agents") {
    // Degenerate roster: three copies of one projection; the composition
    // collapses to a single application.
    const ConvexSet line = ConvexSet::hyperplane({1.0, 1.0}, 1.0);
    Scenario s;
    s.name = "identical-agents";
    s.dim = 2;
    s.agents = {
        AgentOperator::projection("agent-1", line),
        AgentOperator::projection("agent-2", line),
        AgentOperator::projection("agent-3", line),
    };
    s.x0 = StateVector{0.0, 0.0};
    s.schedule = Schedule::constant(1.0);
    s.stop = StopRule(100, 1e-12);
    s.feasible_refs = {StateVector{0.5, 0.5}};
    s.expected = ExpectedPoint{StateVector{0.5, 0.5}, 1e-12};
    return s;
  }
  if (name == "parallel-planes") {
    // Empty intersection: two parallel hyperplanes at separation 1. The
    // iterate settles on the second plane while the within-round agent
    // states keep oscillating across the gap.
    Scenario s;
    s.name = "parallel-planes";
    s.dim = 2;
    s.agents = {
        AgentOperator::projection("plane-0", ConvexSet::hyperplane({1.0, 0.0}, 0.0)),
        AgentOperator::projection("plane-1", ConvexSet::hyperplane({1.0, 0.0}, 1.0)),
    };
    s.x0 = StateVector{0.3, 0.7};
    s.schedule = Schedule::constant(1.0);
    s.stop = StopRule(50, 0.0);
    return s;
  }
  throw scenario_error("unknown builtin scenario '" + name + "'");
}

}  // namespace proxcycle

#endif  // PROXCYCLE_SCENARIO_HPP
