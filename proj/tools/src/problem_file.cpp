#include "beliefplan_cli/problem_file.hpp"

#include <fstream>
#include <set>

#include <beliefplan/formula_parser.hpp>
#include <beliefplan/noise_expression.hpp>

namespace beliefplan::cli {
namespace {

using nlohmann::json;

[[noreturn]] void schema(const std::string& path, const std::string& reason) {
  throw LoadError(kSchemaError, path, reason);
}

std::string join(const std::string& path, const std::string& key) {
  return path.empty() ? key : path + "." + key;
}

std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

// Runs fn, reclassifying library errors into exit codes tagged with path.
template <typename Fn>
auto guarded(const std::string& path, Fn&& fn) -> decltype(fn()) {
  try {
    return fn();
  } catch (const LoadError&) {
    throw;
  } catch (const FormulaError& e) {
    throw LoadError(kFormulaError, path, e.what());
  } catch (const Error& e) {
    throw LoadError(kNumericError, path, e.what());
  }
}

const json& field(const json& obj, const std::string& path, const std::string& key) {
  auto it = obj.find(key);
  if (it == obj.end()) schema(join(path, key), "missing required field");
  return *it;
}

const json* optional_field(const json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void require_object(const json& j, const std::string& path) {
  if (!j.is_object()) schema(path, "expected an object");
}

double number(const json& j, const std::string& path) {
  if (!j.is_number()) schema(path, "expected a number");
  return j.get<double>();
}

long integer(const json& j, const std::string& path, long min_value) {
  if (!j.is_number_integer()) schema(path, "expected an integer");
  const long v = j.get<long>();
  if (v < min_value) schema(path, "must be at least " + std::to_string(min_value));
  return v;
}

std::string text(const json& j, const std::string& path) {
  if (!j.is_string()) schema(path, "expected a string");
  return j.get<std::string>();
}

Vector vector_of(const json& j, const std::string& path) {
  if (!j.is_array()) schema(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = number(j[i], at_index(path, i));
  return v;
}

Matrix matrix_of(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) schema(path, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string row_path = at_index(path, r);
    if (!j[r].is_array()) schema(row_path, "expected an array of numbers");
    if (j[r].size() != cols) schema(row_path, "rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = number(j[r][c], at_index(row_path, c));
    }
  }
  return m;
}

void require_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& path) {
  if (m.rows() != rows || m.cols() != cols) {
    throw LoadError(kNumericError, path,
                    "expected " + std::to_string(rows) + "x" + std::to_string(cols) + ", got " +
                        std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
  }
}

void require_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.count(key)) schema(join(path, key), "unknown field");
  }
}

SystemMode parse_mode(const json& j, const std::string& path, int n, int m, bool allow_observation) {
  require_object(j, path);
  require_keys(j, path, {"A", "B", "W", "C", "noise"});
  Matrix A = matrix_of(field(j, path, "A"), join(path, "A"));
  Matrix B = matrix_of(field(j, path, "B"), join(path, "B"));
  Matrix W = Matrix::Zero(n, n);
  if (const json* w = optional_field(j, "W")) W = matrix_of(*w, join(path, "W"));
  else if (allow_observation) schema(join(path, "W"), "missing required field");
  require_shape(A, n, n, join(path, "A"));
  require_shape(B, n, m, join(path, "B"));
  require_shape(W, n, n, join(path, "W"));

  const json* c = optional_field(j, "C");
  if (!c) {
    if (optional_field(j, "noise")) schema(join(path, "noise"), "noise given without C");
    return SystemMode(std::move(A), std::move(B), std::move(W));
  }
  if (!allow_observation) schema(join(path, "C"), "real modes carry no observation model");
  Matrix C = matrix_of(*c, join(path, "C"));
  require_shape(C, C.rows(), n, join(path, "C"));
  const std::string noise_path = join(path, "noise");
  const json& noise = field(j, path, "noise");
  NoiseModel model;
  if (noise.is_string()) {
    const std::string expr = noise.get<std::string>();
    model = guarded(noise_path, [&] { return ScalarExpression::parse(expr, n); });
  } else {
    Matrix V = matrix_of(noise, noise_path);
    require_shape(V, C.rows(), C.rows(), noise_path);
    model = std::move(V);
  }
  return guarded(path, [&] {
    return SystemMode(std::move(A), std::move(B), std::move(W), std::move(C), std::move(model));
  });
}

Polytope parse_domain(const json& j, const std::string& path, int m) {
  require_object(j, path);
  require_keys(j, path, {"box", "vertices"});
  const json* box = optional_field(j, "box");
  const json* verts = optional_field(j, "vertices");
  if ((box == nullptr) == (verts == nullptr)) schema(path, "expected exactly one of box, vertices");
  if (box) {
    const std::string bp = join(path, "box");
    const Matrix bounds = matrix_of(*box, bp);
    require_shape(bounds, m, 2, bp);
    return guarded(bp, [&] { return Polytope::box(bounds.col(0), bounds.col(1)); });
  }
  const std::string vp = join(path, "vertices");
  const Matrix pts = matrix_of(*verts, vp);
  require_shape(pts, pts.rows(), m, vp);
  std::vector<Vector> list;
  for (Eigen::Index r = 0; r < pts.rows(); ++r) list.emplace_back(pts.row(r).transpose());
  return guarded(vp, [&] { return Polytope::from_vertices(std::move(list)); });
}

RrtParams parse_planner(const json& j, const std::string& path, std::optional<int>& k_max,
                        std::optional<std::uint64_t>& seed) {
  require_object(j, path);
  require_keys(j, path, {"rrt_timeout", "delta_near", "delta_drain", "goal_bias", "min_num_of_steps",
                         "max_num_of_steps", "iteration_cap", "K_max", "seed"});
  RrtParams p;
  p.rrt_timeout = number(field(j, path, "rrt_timeout"), join(path, "rrt_timeout"));
  p.delta_near = number(field(j, path, "delta_near"), join(path, "delta_near"));
  p.delta_drain = number(field(j, path, "delta_drain"), join(path, "delta_drain"));
  p.goal_bias = number(field(j, path, "goal_bias"), join(path, "goal_bias"));
  p.min_num_of_steps = static_cast<int>(integer(field(j, path, "min_num_of_steps"),
                                                join(path, "min_num_of_steps"), 1));
  p.max_num_of_steps = static_cast<int>(integer(field(j, path, "max_num_of_steps"),
                                                join(path, "max_num_of_steps"), 1));
  if (const json* cap = optional_field(j, "iteration_cap")) {
    p.iteration_cap = integer(*cap, join(path, "iteration_cap"), 1);
  }
  if (const json* k = optional_field(j, "K_max")) k_max = static_cast<int>(integer(*k, join(path, "K_max"), 1));
  if (const json* s = optional_field(j, "seed")) seed = static_cast<std::uint64_t>(integer(*s, join(path, "seed"), 0));
  guarded(path, [&] { p.validate(); });
  return p;
}

SimulationConfig parse_simulation(const json& j, const std::string& path, int n, int m, int modes) {
  require_object(j, path);
  require_keys(j, path, {"real_modes", "real_x0", "num_steps", "lqr"});
  SimulationConfig sim;
  const std::string rp = join(path, "real_modes");
  const json& real = field(j, path, "real_modes");
  if (!real.is_array() || real.empty()) schema(rp, "expected a nonempty array");
  if (static_cast<int>(real.size()) != modes) {
    throw LoadError(kNumericError, rp, "expected one real mode per planner mode");
  }
  for (std::size_t i = 0; i < real.size(); ++i) {
    sim.real_modes.push_back(parse_mode(real[i], at_index(rp, i), n, m, false));
  }
  sim.real_x0 = vector_of(field(j, path, "real_x0"), join(path, "real_x0"));
  if (sim.real_x0.size() != n) {
    throw LoadError(kNumericError, join(path, "real_x0"), "expected length " + std::to_string(n));
  }
  if (const json* steps = optional_field(j, "num_steps")) {
    sim.num_steps = static_cast<std::size_t>(integer(*steps, join(path, "num_steps"), 0));
  }
  const std::string lp = join(path, "lqr");
  const json& lqr = field(j, path, "lqr");
  require_object(lqr, lp);
  require_keys(lqr, lp, {"horizon", "Q_final", "Q", "R"});
  sim.lqr.horizon = static_cast<int>(integer(field(lqr, lp, "horizon"), join(lp, "horizon"), 1));
  sim.lqr.Q_final = matrix_of(field(lqr, lp, "Q_final"), join(lp, "Q_final"));
  sim.lqr.Q = matrix_of(field(lqr, lp, "Q"), join(lp, "Q"));
  sim.lqr.R = matrix_of(field(lqr, lp, "R"), join(lp, "R"));
  require_shape(sim.lqr.Q_final, n, n, join(lp, "Q_final"));
  require_shape(sim.lqr.Q, n, n, join(lp, "Q"));
  require_shape(sim.lqr.R, m, m, join(lp, "R"));
  for (const auto* key : {"Q_final", "Q"}) {
    const Matrix& q = std::string(key) == "Q" ? sim.lqr.Q : sim.lqr.Q_final;
    if (min_symmetric_eigenvalue(0.5 * (q + q.transpose())) < -1e-9) {
      throw LoadError(kNumericError, join(lp, key), "must be positive semidefinite");
    }
  }
  if (min_symmetric_eigenvalue(0.5 * (sim.lqr.R + sim.lqr.R.transpose())) <= 0.0) {
    throw LoadError(kNumericError, join(lp, "R"), "must be positive definite");
  }
  return sim;
}

}  // namespace

ProblemFile parse_problem(const json& doc) {
  require_object(doc, "");
  require_keys(doc, "", {"state_dim", "control_dim", "modes", "control_domain", "initial",
                         "named_formulas", "formula", "planner", "simulation"});
  const int n = static_cast<int>(integer(field(doc, "", "state_dim"), "state_dim", 1));
  const int m = static_cast<int>(integer(field(doc, "", "control_dim"), "control_dim", 1));

  const json& modes_json = field(doc, "", "modes");
  if (!modes_json.is_array() || modes_json.empty()) schema("modes", "expected a nonempty array");
  std::vector<SystemMode> modes;
  for (std::size_t i = 0; i < modes_json.size(); ++i) {
    modes.push_back(parse_mode(modes_json[i], at_index("modes", i), n, m, true));
  }
  Polytope domain = parse_domain(field(doc, "", "control_domain"), "control_domain", m);
  SwitchedSystem sys = guarded("modes", [&] { return SwitchedSystem(modes, domain); });
  const int mode_count = sys.mode_count();

  const json& initial = field(doc, "", "initial");
  require_object(initial, "initial");
  require_keys(initial, "initial", {"mean", "cov"});
  Vector mean = vector_of(field(initial, "initial", "mean"), "initial.mean");
  Matrix cov = matrix_of(field(initial, "initial", "cov"), "initial.cov");
  if (mean.size() != n) throw LoadError(kNumericError, "initial.mean", "expected length " + std::to_string(n));
  require_shape(cov, n, n, "initial.cov");
  BeliefState b0 = guarded("initial.cov", [&] { return make_belief(mean, cov); });

  std::map<std::string, std::string> defs;
  if (const json* named = optional_field(doc, "named_formulas")) {
    if (!named->is_object()) schema("named_formulas", "expected an object");
    for (const auto& [name, def] : named->items()) defs[name] = text(def, join("named_formulas", name));
  }
  const auto bound = guarded("named_formulas", [&] { return bind_named_formulas(defs, n, mode_count); });
  const std::string formula_text = text(field(doc, "", "formula"), "formula");
  Formula formula = guarded("formula", [&] {
    return parse_formula(formula_text, n, mode_count, [&](std::string_view name) -> std::optional<Formula> {
      auto it = bound.find(std::string(name));
      if (it == bound.end()) return std::nullopt;
      return it->second;
    });
  });

  ProblemFile out{Problem{std::move(sys), std::move(b0), std::move(formula)}, {}, {}, {}, {}};
  guarded("formula", [&] { out.problem.validate(); });
  out.params = parse_planner(field(doc, "", "planner"), "planner", out.k_max, out.seed);
  if (const json* sim = optional_field(doc, "simulation")) {
    out.simulation = parse_simulation(*sim, "simulation", n, m, mode_count);
  }
  return out;
}

ProblemFile load_problem(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw LoadError(kSchemaError, "", "cannot open problem file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw LoadError(kSchemaError, "", std::string("malformed JSON: ") + e.what());
  }
  return parse_problem(doc);
}

}  // namespace beliefplan::cli
