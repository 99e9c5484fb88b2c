#include <omp.h>

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "rst/commands.hpp"
#include "rst/config.hpp"
#include "rst/oracle.hpp"
#include "rst/pareto.hpp"

namespace {

constexpr const char* kDefaultFishery =
    R"({"model": "fishery-beverton-holt", "horizon": 50, "initial_state": 60})";

std::vector<double> parse_list(const std::string& text, const char* flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    std::size_t pos = 0;
    double v = 0;
    try {
      v = std::stod(item, &pos);
    } catch (const std::exception&) {
      pos = 0;
    }
    if (pos == 0) throw rst::cli::ConfigError(std::string(flag) + ": cannot parse '" + text + "'");
    out.push_back(v);
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robust sustainable thresholds: fronts, membership and oracles"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  std::string out_dir;
  std::size_t jobs = 0;
  bool use_oracle = false;
  std::string interp;
  bool full_grid = false;
  std::string threshold;
  std::string c0;
  std::string sigma;
  bool dump_tables = false;

  app.add_option("--config", config_path, "JSON run configuration");
  app.add_option("--out", out_dir, "Output directory (overrides output_dir)");
  app.add_option("--jobs", jobs, "Worker threads (0: OpenMP default)");
  app.add_flag("--oracle", use_oracle, "Cross-check with the brute-force oracles");
  app.add_option("--interp", interp, "Interpolation mode")
      ->check(CLI::IsMember({"multilinear", "nearest"}));
  app.add_flag("--full-grid", full_grid, "Solve on every grid node instead of the reachable tube");

  auto* weak = app.add_subcommand("weak-front", "Trace the weak Pareto front on the ray mesh");
  auto* strong = app.add_subcommand("strong-front", "Strong Pareto maxima from a feasible c0");
  strong->add_option("--c0", c0, "Starting threshold, comma separated");
  strong->add_option("--sigma", sigma, "\"all\" or a 1-based order such as 2,1");
  auto* member = app.add_subcommand("membership", "Decide c in S(xi) and report W(xi, c)");
  auto* value = app.add_subcommand("value", "Print W(xi, c)");
  value->add_flag("--dump-tables", dump_tables, "Write value tables and reachable sets as CSV");
  auto* check = app.add_subcommand("oracle-check", "Compare the solver with all three oracles");
  auto* analytic = app.add_subcommand("analytic-fishery", "Closed-form fishery quantities");
  for (auto* sub : {member, value, check, analytic}) {
    sub->add_option("--threshold", threshold, "Threshold c, comma separated");
  }
  CLI11_PARSE(app, argc, argv);

  try {
    if (config_path.empty() && !analytic->parsed()) {
      throw rst::cli::ConfigError("--config is required for this command");
    }
    rst::cli::RunConfig cfg = config_path.empty() ? rst::cli::parse_config(kDefaultFishery)
                                                  : rst::cli::load_config(config_path);
    if (!out_dir.empty()) cfg.output_dir = out_dir;
    if (jobs) cfg.jobs = jobs;
    if (use_oracle) cfg.oracle = true;
    if (!interp.empty()) cfg.interp = rst::parse_interp_mode(interp);
    if (full_grid) cfg.full_grid = true;
    if (!threshold.empty()) cfg.threshold = parse_list(threshold, "--threshold");
    if (!c0.empty()) cfg.strong.c0 = parse_list(c0, "--c0");
    if (!sigma.empty()) cfg.strong.permutation = sigma;
    rst::cli::validate(cfg);
    if (cfg.jobs) omp_set_num_threads(static_cast<int>(cfg.jobs));

    if (weak->parsed()) return rst::cli::cmd_weak_front(cfg, std::cout);
    if (strong->parsed()) return rst::cli::cmd_strong_front(cfg, std::cout);
    if (member->parsed()) return rst::cli::cmd_membership(cfg, std::cout);
    if (value->parsed()) return rst::cli::cmd_value(cfg, dump_tables, std::cout);
    if (check->parsed()) return rst::cli::cmd_oracle_check(cfg, std::cout);
    return rst::cli::cmd_analytic_fishery(cfg, std::cout);
  } catch (const rst::cli::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
