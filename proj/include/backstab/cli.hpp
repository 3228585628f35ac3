#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "backstab/strategies.hpp"

namespace backstab::cli {

enum ExitCode : int { kOk = 0, kUsage = 1, kCapRefused = 2 };

/// Runs one command line (without the program name) and returns the exit code.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

/// Seed of a simulated table/sweep cell, stable under reordering of the cells.
std::uint64_t cell_seed(std::uint64_t master, int n, int m, StrategyProfile profile);

struct TableRow {
  int n;
  int m;
};
/// The default configuration set of the `table` command.
std::vector<TableRow> default_table_rows();

inline constexpr std::string_view kTableHeader = "n,m,w,RV,w_rvc,RVC,w_vlopt,VL_OPT,w_exact,w_rvc_exact,w_vlopt_exact";

}  // namespace backstab::cli
