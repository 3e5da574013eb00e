#include "beliefplan_cli/run.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <spdlog/spdlog.h>

namespace beliefplan::cli {
namespace {

std::string fmt_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

const char* status_name(SegmentStatus s) {
  switch (s) {
    case SegmentStatus::Success: return "success";
    case SegmentStatus::Exhausted: return "exhausted";
    case SegmentStatus::InfeasibleStart: return "infeasible_start";
  }
  return "unknown";
}

nlohmann::json plan_json(const DiscretePlan& plan) {
  auto segs = nlohmann::json::array();
  for (const auto& s : plan.segments) {
    segs.push_back({{"atomic", s.atomic.name},
                    {"mode", s.mode},
                    {"dwell_min", s.dwell_min},
                    {"dwell_max", s.dwell_max}});
  }
  return segs;
}

void header_cells(std::ostringstream& os, const char* prefix, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) os << ',' << prefix << i;
}

void cov_header(std::ostringstream& os, Eigen::Index n, bool off_diagonal) {
  for (Eigen::Index i = 0; i < n; ++i) os << ",cov_" << i << '_' << i;
  if (!off_diagonal) return;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) os << ",cov_" << i << '_' << j;
  }
}

void cells(std::ostringstream& os, const Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) os << ',' << fmt_double(v(i));
}

void cov_cells(std::ostringstream& os, const Matrix& c, bool off_diagonal) {
  for (Eigen::Index i = 0; i < c.rows(); ++i) os << ',' << fmt_double(c(i, i));
  if (!off_diagonal) return;
  for (Eigen::Index i = 0; i < c.rows(); ++i) {
    for (Eigen::Index j = i + 1; j < c.cols(); ++j) os << ',' << fmt_double(c(i, j));
  }
}

void blanks(std::ostringstream& os, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) os << ',';
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  out << body;
}

}  // namespace

nlohmann::json plan_report(const SynthesisResult& result, std::uint64_t seed) {
  nlohmann::json doc;
  doc["solved"] = result.solved();
  doc["seed"] = seed;
  doc["k_max"] = result.k_max;
  doc["cegis_iterations"] = result.iterations.size();
  auto history = nlohmann::json::array();
  for (const auto& it : result.iterations) {
    nlohmann::json entry;
    entry["segments"] = plan_json(it.candidate);
    entry["feasible"] = it.feasible;
    entry["failed_segment"] = it.failed_segment ? nlohmann::json(*it.failed_segment) : nlohmann::json();
    entry["failure"] = it.failed_segment ? nlohmann::json(status_name(it.failure)) : nlohmann::json();
    entry["realized_dwells"] = it.realized_dwells;
    entry["rrt_iterations"] = it.rrt_iterations;
    history.push_back(std::move(entry));
  }
  doc["candidates"] = std::move(history);
  auto cex = nlohmann::json::array();
  for (const auto& prefix : result.counterexamples.prefixes()) {
    auto seq = nlohmann::json::array();
    for (const auto& [name, mode] : prefix) seq.push_back({name, mode});
    cex.push_back(std::move(seq));
  }
  doc["counterexamples"] = std::move(cex);
  doc["plan"] = result.plan ? plan_json(*result.plan) : nlohmann::json();
  if (result.solution) {
    doc["num_steps"] = result.solution->num_steps();
    doc["segment_boundaries"] = result.solution->segment_boundaries;
  } else {
    doc["num_steps"] = nullptr;
    doc["segment_boundaries"] = nullptr;
  }
  doc["warnings"] = result.warnings;
  return doc;
}

std::string trajectory_csv(const SolutionTrajectory& t) {
  const Eigen::Index n = t.beliefs.front().dim();
  const Eigen::Index m = t.controls.empty() ? 0 : t.controls.front().size();
  std::ostringstream os;
  os << "k,mode";
  header_cells(os, "mean_", n);
  cov_header(os, n, true);
  header_cells(os, "u_", m);
  os << '\n';
  for (std::size_t k = 0; k < t.beliefs.size(); ++k) {
    os << k << ',';
    if (k < t.modes.size()) os << t.modes[k];
    cells(os, t.beliefs[k].mean());
    cov_cells(os, t.beliefs[k].cov(), true);
    if (k < t.controls.size()) cells(os, t.controls[k]);
    else blanks(os, m);
    os << '\n';
  }
  return os.str();
}

std::string simulation_csv(const SimulationResult& sim, bool satisfied) {
  const Eigen::Index n = sim.real_states.front().size();
  const Eigen::Index m = sim.controls.empty() ? 0 : sim.controls.front().size();
  std::ostringstream os;
  os << "# satisfied: " << (satisfied ? 1 : 0) << '\n';
  os << 'k';
  header_cells(os, "x_", n);
  header_cells(os, "mean_", n);
  cov_header(os, n, false);
  header_cells(os, "u_", m);
  os << '\n';
  for (std::size_t k = 0; k < sim.real_states.size(); ++k) {
    os << k;
    cells(os, sim.real_states[k]);
    cells(os, sim.estimated.beliefs[k].mean());
    cov_cells(os, sim.estimated.beliefs[k].cov(), false);
    if (k < sim.controls.size()) cells(os, sim.controls[k]);
    else blanks(os, m);
    os << '\n';
  }
  return os.str();
}

int run(const RunOptions& opts) {
  ProblemFile pf = load_problem(opts.problem);
  spdlog::info("loaded '{}': {} mode(s), formula horizon {}", opts.problem,
               pf.problem.system.mode_count(), horizon(pf.problem.formula));
  if (opts.validate_only) return kSolved;

  RrtParams params = pf.params;
  if (opts.iteration_cap) params.iteration_cap = *opts.iteration_cap;
  const std::uint64_t seed = opts.seed.value_or(pf.seed.value_or(0));
  const int k_max = opts.k_max.value_or(pf.k_max.value_or(kDefaultKMax));

  Rng rng(seed);
  const SynthesisResult result = solve(pf.problem, params, k_max, rng);
  for (const auto& it : result.iterations) {
    spdlog::debug("candidate with {} segment(s): {}", it.candidate.size(),
                  it.feasible ? "feasible" : status_name(it.failure));
  }
  for (const auto& w : result.warnings) spdlog::warn("{}", w);

  const std::filesystem::path out_dir(opts.out_dir);
  std::filesystem::create_directories(out_dir);
  write_file(out_dir / "plan.json", plan_report(result, seed).dump(2) + "\n");
  if (!result.solved()) {
    spdlog::error("no solution within K_max = {} after {} candidate(s)", k_max,
                  result.iterations.size());
    return kNoSolution;
  }
  const SolutionTrajectory& traj = *result.solution;
  write_file(out_dir / "trajectory.csv", trajectory_csv(traj));
  spdlog::info("solution with {} steps after {} candidate(s)", traj.num_steps(),
               result.iterations.size());

  if (pf.simulation && !opts.no_simulation) {
    const SimulationConfig& cfg = *pf.simulation;
    const auto& sys = pf.problem.system;
    std::map<int, LqrGains> gains;
    for (int q = 0; q < sys.mode_count(); ++q) {
      gains.emplace(q, lqr_gains(sys.mode(q), cfg.lqr.horizon, cfg.lqr.Q_final, cfg.lqr.Q, cfg.lqr.R));
    }
    const SwitchedSystem real(cfg.real_modes, sys.control_domain(), sys.sampling_period());
    const std::size_t steps = cfg.num_steps.value_or(traj.num_steps());
    const SimulationResult sim = simulate(sys, real, traj, cfg.real_x0, steps, gains, rng);
    const bool ok = satisfies(pf.problem.formula, sim.estimated);
    write_file(out_dir / "simulation.csv", simulation_csv(sim, ok));
    spdlog::info("tracked execution {} the formula", ok ? "satisfies" : "violates");
  }
  return kSolved;
}

}  // namespace beliefplan::cli
