#include "rst/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>

#include "rst/csv.hpp"
#include "rst/oracle.hpp"
#include "rst/pareto.hpp"

namespace rst::cli {

namespace fs = std::filesystem;

namespace {

constexpr double kExactTol = 1e-12;

std::ofstream open_output(const RunConfig& cfg, const std::string& name) {
  fs::create_directories(cfg.output_dir);
  const fs::path path = fs::path(cfg.output_dir) / name;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  CsvWriter(out).comment("config: " + serialize_config(cfg, -1));
  return out;
}

ThresholdVector query_threshold(const RunConfig& cfg) {
  if (!cfg.threshold) {
    throw ConfigError("threshold: required for this command (config key or --threshold)");
  }
  return ThresholdVector(*cfg.threshold);
}

bool exact_setting(const RunConfig& cfg) {
  return cfg.model == kTabularModel && cfg.interp == InterpMode::nearest;
}

void write_set_sample(const RunConfig& cfg, const pareto::FrontResult& front) {
  const std::size_t m = front.points.front().point.size();
  std::vector<double> lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> hi(m, -std::numeric_limits<double>::infinity());
  for (const auto& p : front.points) {
    for (std::size_t j = 0; j < m; ++j) {
      lo[j] = std::min(lo[j], p.point[j]);
      hi[j] = std::max(hi[j], p.point[j]);
    }
  }
  const std::size_t per_axis = m <= 2 ? 41 : (m == 3 ? 11 : 5);
  auto out = open_output(cfg, "set.csv");
  CsvWriter csv(out);
  std::vector<std::string> cols;
  for (std::size_t j = 0; j < m; ++j) cols.push_back("c_" + std::to_string(j + 1));
  cols.emplace_back("in_set");
  csv.header(cols);
  std::vector<std::size_t> idx(m, 0);
  while (true) {
    std::vector<double> c(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double margin = 0.1 * std::max(hi[j] - lo[j], 1.0);
      const double a = lo[j] - margin;
      const double b = hi[j] + margin;
      c[j] = a + (b - a) * static_cast<double>(idx[j]) / static_cast<double>(per_axis - 1);
    }
    const bool in = pareto::reconstruct_set(front, ThresholdVector(c));
    std::vector<std::string> cells;
    for (double v : c) cells.push_back(format_double(v));
    cells.emplace_back(in ? "1" : "0");
    csv.row(cells);
    std::size_t j = 0;
    while (j < m && ++idx[j] == per_axis) idx[j++] = 0;
    if (j == m) break;
  }
}

void write_analytic_csv(const RunConfig& cfg, const std::string& name) {
  const auto params = cfg.fishery.params();
  const auto& a = params.scenario(fishery::kScenarioA);
  const auto& b = params.scenario(fishery::kScenarioB);
  const double xi = cfg.initial_state.front();
  double cap = xi;
  for (auto w : params.active) cap = std::min(cap, params.scenario(w).K);
  const double x_end = std::max(a.K, b.K);
  auto out = open_output(cfg, name);
  CsvWriter csv(out);
  csv.header({"x", "sigma_a", "sigma_b", "min_sigma", "boundary"});
  constexpr int kPoints = 601;
  for (int i = 0; i < kPoints; ++i) {
    const double x = x_end * i / (kPoints - 1);
    const double ms = fishery::min_surplus(x, params);
    const std::vector<double> row{x, fishery::surplus(x, a), fishery::surplus(x, b), ms,
                                  x <= cap ? ms : std::numeric_limits<double>::quiet_NaN()};
    csv.row(row);
  }
}

void write_plot_script(const RunConfig& cfg) {
  fs::create_directories(cfg.output_dir);
  std::ofstream out(fs::path(cfg.output_dir) / "plot_front.py");
  out << R"(# Plots front.csv (and analytic.csv when present) next to this script.
import os
import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import pandas as pd

here = os.path.dirname(os.path.abspath(__file__))
front = pd.read_csv(os.path.join(here, "front.csv"), comment="#")
fig, ax = plt.subplots(figsize=(6, 4.5))
ax.plot(front["p_1"], front["p_2"], ".", ms=3, label="computed weak front")
analytic = os.path.join(here, "analytic.csv")
if os.path.exists(analytic):
    a = pd.read_csv(analytic, comment="#")
    ax.plot(a["x"], a["sigma_a"], "--", lw=1, label="sigma_a")
    ax.plot(a["x"], a["sigma_b"], "--", lw=1, label="sigma_b")
    ax.plot(a["x"], a["boundary"], "k-", lw=1.5, label="analytic boundary")
    ax.set_xlim(0, a["x"].max())
    ax.set_ylim(0, 1.2 * max(a["sigma_a"].max(), a["sigma_b"].max()))
ax.set_xlabel("c_1")
ax.set_ylabel("c_2")
ax.legend()
fig.tight_layout()
fig.savefig(os.path.join(here, "front.png"), dpi=150)
)";
}

}  // namespace

int cmd_weak_front(const RunConfig& cfg, std::ostream& log) {
  const Setup s = build_setup(cfg);
  const auto front = pareto::weak_front(*s.problem, s.mesh, {cfg.front_tol});
  int status = 0;

  for (const auto& sk : front.skipped) {
    log << "warning: mesh point " << to_string(sk.source) << " has W = " << format_double(sk.value)
        << " >= 0 (not outside S); skipped\n";
  }
  if (front.points.empty()) {
    log << "error: no mesh point lies outside S; raise ray_mesh.anchors\n";
    return 1;
  }
  if (const auto bad = front.violations()) {
    log << "validation failed: " << bad << " front point(s) with |W(p)| > front_tol = "
        << format_double(cfg.front_tol) << " (max " << format_double(front.max_abs_point_value())
        << ")\n";
    status = 1;
  }
  const double order_tol = std::max(cfg.front_tol, 1e-9);
  for (std::size_t i = 1; i < front.points.size(); ++i) {
    const auto& a = front.points[i - 1];
    const auto& b = front.points[i];
    if (a.axis != b.axis) continue;
    if (b.point[a.axis] < a.point[a.axis] - order_tol) {
      log << "validation failed: front not monotone along axis " << a.axis + 1 << " at "
          << to_string(b.source) << "\n";
      status = 1;
    }
  }

  if (cfg.oracle) {
    std::size_t checked = 0;
    std::size_t mismatched = 0;
    for (const auto& p : front.points) {
      try {
        const double w = oracle::closedloop_maximin(*s.system, s.problem->controls(),
                                                    cfg.initial_state, p.point,
                                                    {cfg.oracle_budget});
        ++checked;
        if (std::abs(w - p.point_value) > kExactTol) {
          ++mismatched;
          log << "oracle: W(p) = " << format_double(p.point_value) << " but closed-loop tree gives "
              << format_double(w) << " at p = " << to_string(p.point) << "\n";
        }
      } catch (const oracle::BudgetExceeded& e) {
        log << "oracle: " << e.what() << "; cross-check stopped\n";
        break;
      }
    }
    log << "oracle: checked " << checked << " front point(s), " << mismatched << " mismatch(es)\n";
    if (mismatched && exact_setting(cfg)) status = 1;
  }

  {
    auto out = open_output(cfg, "front.csv");
    pareto::write_front_csv(out, front);
  }
  write_set_sample(cfg, front);
  if (cfg.model == kFisheryModel) write_analytic_csv(cfg, "analytic.csv");
  write_plot_script(cfg);

  log << "weak front: " << front.points.size() << " point(s), " << front.skipped.size()
      << " skipped, max |W(p)| = " << format_double(front.max_abs_point_value()) << "\n";
  log << "wrote " << (fs::path(cfg.output_dir) / "front.csv").string() << "\n";
  return status;
}

int cmd_strong_front(const RunConfig& cfg, std::ostream& log) {
  if (!cfg.strong.c0) throw ConfigError("strong.c0: required for strong-front (or --c0)");
  const Setup s = build_setup(cfg);
  const ThresholdVector c0(*cfg.strong.c0);
  int status = 0;
  for (const auto& perm : permutations(cfg)) {
    std::string label;
    for (std::size_t i = 0; i < perm.size(); ++i) label += (i ? "-" : "") + std::to_string(perm[i] + 1);
    pareto::StrongChain chain;
    try {
      chain = pareto::strong_pareto_point(*s.problem, c0, perm,
                                          {cfg.membership_tol, cfg.neg_inf});
    } catch (const pareto::InfeasibleThreshold& e) {
      log << "refused: " << e.what() << "\n";
      return 2;
    }
    const double mono = chain.monotone_violation();
    log << "sigma = " << label << ": endpoint " << to_string(chain.endpoint())
        << ", identity residual " << format_double(chain.identity_residual()) << "\n";
    if (!chain.monotone(cfg.front_tol)) {
      log << "validation failed: chain decreases by " << format_double(mono)
          << " (> front_tol); discretization diagnostic, chain not written\n";
      status = 1;
      continue;
    }
    auto out = open_output(cfg, "chain_" + label + ".csv");
    pareto::write_chain_csv(out, chain);
  }
  return status;
}

int cmd_membership(const RunConfig& cfg, std::ostream& log) {
  const ThresholdVector c = query_threshold(cfg);
  const Setup s = build_setup(cfg);
  const double w = dp::robust_value(*s.problem, c);
  log << "c = " << to_string(c) << "\n";
  log << "W(xi, c) = " << format_double(w) << "\n";
  log << "member = " << (w >= -cfg.membership_tol ? "yes" : "no")
      << " (tol = " << format_double(cfg.membership_tol) << ")\n";
  if (cfg.model != kTabularModel) {
    log << "note: grid spacing h = " << format_double(s.problem->grid().max_spacing())
        << "; |W| below about h is within discretization error\n";
  }
  if (cfg.oracle) {
    try {
      const oracle::OracleBudget budget{cfg.oracle_budget};
      const auto& ctl = s.problem->controls();
      log << "closed-loop oracle = "
          << format_double(oracle::closedloop_maximin(*s.system, ctl, cfg.initial_state, c, budget))
          << "\n";
      log << "open-loop oracle = "
          << format_double(oracle::openloop_maximin(*s.system, ctl, cfg.initial_state, c, budget))
          << "\n";
      log << "exhaustive membership = "
          << (oracle::exhaustive_membership(*s.system, ctl, cfg.initial_state, c, budget) ? "yes"
                                                                                         : "no")
          << "\n";
    } catch (const oracle::BudgetExceeded& e) {
      log << "error: " << e.what() << "\n";
      return 1;
    }
  }
  return 0;
}

int cmd_value(const RunConfig& cfg, bool dump_tables, std::ostream& log) {
  const ThresholdVector c = query_threshold(cfg);
  const Setup s = build_setup(cfg);
  if (!dump_tables) {
    log << format_double(dp::robust_value(*s.problem, c)) << "\n";
    return 0;
  }
  const auto sol = dp::backward_recursion(*s.problem, c);
  log << format_double(sol.root_value) << "\n";
  {
    auto out = open_output(cfg, "value_tables.csv");
    dp::write_value_tables_csv(out, *s.problem, sol.tables);
  }
  auto out = open_output(cfg, "reachable.csv");
  write_reachable_csv(out, s.problem->reach(), s.problem->grid());
  return 0;
}

int cmd_oracle_check(const RunConfig& cfg, std::ostream& log) {
  const ThresholdVector c = query_threshold(cfg);
  const Setup s = build_setup(cfg);
  const oracle::OracleBudget budget{cfg.oracle_budget};
  const auto& ctl = s.problem->controls();
  double closed = 0, open = 0;
  bool exhaustive = false;
  try {
    closed = oracle::closedloop_maximin(*s.system, ctl, cfg.initial_state, c, budget);
    open = oracle::openloop_maximin(*s.system, ctl, cfg.initial_state, c, budget);
    exhaustive = oracle::exhaustive_membership(*s.system, ctl, cfg.initial_state, c, budget);
  } catch (const oracle::BudgetExceeded& e) {
    log << "error: " << e.what() << "\n";
    return 1;
  }
  const double w = dp::robust_value(*s.problem, c);
  log << "c = " << to_string(c) << "\n";
  log << "dp W = " << format_double(w) << "\n";
  log << "closed-loop = " << format_double(closed) << "\n";
  log << "open-loop = " << format_double(open) << "\n";
  log << "exhaustive membership = " << (exhaustive ? "yes" : "no") << "\n";

  int status = 0;
  if (open > closed + kExactTol) {
    log << "violation: open-loop exceeds closed-loop\n";
    status = 1;
  } else if (closed > open) {
    log << "gap: closed-loop exceeds open-loop by " << format_double(closed - open) << "\n";
  }
  if (exhaustive != (open >= 0)) {
    log << "violation: exhaustive membership disagrees with open-loop >= 0\n";
    status = 1;
  }
  if (std::abs(w - closed) > kExactTol) {
    log << (exact_setting(cfg) ? "violation" : "note") << ": dp differs from closed-loop by "
        << format_double(std::abs(w - closed)) << "\n";
    if (exact_setting(cfg)) status = 1;
  }
  return status;
}

int cmd_analytic_fishery(const RunConfig& cfg, std::ostream& log) {
  if (cfg.model != kFisheryModel) throw ConfigError("model: analytic-fishery needs the fishery model");
  const auto params = cfg.fishery.params();
  const char* names[] = {"a", "b"};
  for (ScenarioId w : {fishery::kScenarioA, fishery::kScenarioB}) {
    const auto& sc = params.scenario(w);
    log << "omega_" << names[w] << ": r = " << format_double(sc.r) << ", K = " << format_double(sc.K)
        << ", x_msy = " << format_double(fishery::x_msy(sc))
        << ", msy = " << format_double(fishery::msy(sc)) << "\n";
  }
  if (cfg.threshold) {
    const ThresholdVector c(*cfg.threshold);
    const double xi = cfg.initial_state.front();
    for (ScenarioId w : params.active) {
      log << "c in S^" << names[w] << "_inf(xi): "
          << (fishery::analytic_det_set_membership(xi, params.scenario(w), c) ? "yes" : "no") << "\n";
    }
    log << "c in intersection: "
        << (fishery::analytic_intersection_membership(xi, params, c) ? "yes" : "no") << "\n";
  }
  write_analytic_csv(cfg, "analytic.csv");
  log << "wrote " << (fs::path(cfg.output_dir) / "analytic.csv").string() << "\n";
  return 0;
}

}  // namespace rst::cli
