#pragma once

// CLI commands. Each writes its files under cfg.output_dir, logs to `log`,
// and returns the process exit status: 0 when every postcondition held,
// 1 when a validation failed, 2 on refused input (e.g. infeasible c0).

#include <ostream>

#include "rst/config.hpp"

namespace rst::cli {

int cmd_weak_front(const RunConfig& cfg, std::ostream& log);
int cmd_strong_front(const RunConfig& cfg, std::ostream& log);
int cmd_membership(const RunConfig& cfg, std::ostream& log);
int cmd_value(const RunConfig& cfg, bool dump_tables, std::ostream& log);
int cmd_oracle_check(const RunConfig& cfg, std::ostream& log);
int cmd_analytic_fishery(const RunConfig& cfg, std::ostream& log);

}  // namespace rst::cli
