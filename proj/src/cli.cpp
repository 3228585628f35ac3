#include "backstab/cli.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <ostream>
#include <sstream>

#include <omp.h>

#include <CLI11.hpp>

#include "backstab/exact_engine.hpp"
#include "backstab/records.hpp"
#include "backstab/simulator.hpp"
#include "backstab/stats.hpp"

namespace backstab::cli {

namespace {

/// A refused or invalid request, carrying its exit code.
struct CommandError : std::runtime_error {
  CommandError(int code, const std::string& what) : std::runtime_error(what), exit_code(code) {}
  int exit_code;
};

struct CommonOptions {
  std::optional<std::uint64_t> cap;
  int workers = 0;
  std::string punish_timing = "next-round";
  bool punish_compliance = false;
};

std::uint64_t resolve_cap(const std::optional<std::uint64_t>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("BACKSTAB_CAP"); env != nullptr && *env != '\0') {
    try {
      std::size_t used = 0;
      const unsigned long long value = std::stoull(env, &used);
      if (used == std::string_view(env).size()) return value;
    } catch (const std::exception&) {
    }
    throw CommandError(kUsage, std::string("BACKSTAB_CAP is not a nonnegative integer: ") + env);
  }
  return kDefaultEnumerationCap;
}

int resolve_workers(int flag) { return flag > 0 ? flag : std::max(1, omp_get_max_threads()); }

PunishTiming resolve_timing(const std::string& text) {
  auto timing = parse_punish_timing(text);
  if (!timing) throw CommandError(kUsage, "unknown --punish-timing '" + text + "' (next-round|same-round)");
  return *timing;
}

StrategyProfile resolve_profile(const std::string& text) {
  auto profile = parse_profile(text);
  if (!profile) throw CommandError(kUsage, "unknown profile '" + text + "' (RV|RVC|VL_COMP|VL_C|VL_OPT)");
  return *profile;
}

void check_state(int n, int m) {
  if (n < 1 || m < 0 || m > n)
    throw CommandError(kUsage, "invalid state (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                                   "): need 0 <= m <= n and n >= 1");
}

void check_game(int n, int m) {
  if (n < 2 || m < 1 || m >= n)
    throw CommandError(kUsage, "invalid game (n=" + std::to_string(n) + ", m=" + std::to_string(m) +
                                   "): need 1 <= m < n");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file) throw CommandError(kUsage, "cannot write '" + path + "'");
  return file;
}

void finish_output(std::ofstream& file, const std::string& path) {
  file.flush();
  if (!file) throw CommandError(kUsage, "failed writing '" + path + "'");
}

GameConfig make_config(int n, int m, StrategyProfile profile, const CommonOptions& common, std::uint64_t seed) {
  GameConfig config;
  config.n = n;
  config.m = m;
  config.profile = profile;
  config.punish_timing = resolve_timing(common.punish_timing);
  config.punish_compliance = common.punish_compliance;
  config.seed = seed;
  return config;
}

void add_common(CLI::App& cmd, CommonOptions& common, bool simulation_flags) {
  cmd.add_option("--cap", common.cap, "Enumeration cap in profiles (overrides BACKSTAB_CAP)");
  cmd.add_option("--workers", common.workers, "OpenMP worker threads (default: all)");
  if (simulation_flags) {
    cmd.add_option("--punish-timing", common.punish_timing, "next-round (default) or same-round");
    cmd.add_flag("--punish-compliance", common.punish_compliance,
                 "VL_C Traitors comply while a punishment is pending");
  }
}

// exact ---------------------------------------------------------------------

struct ExactArgs {
  std::string recurrence;
  int n = -1;
  int m = -1;
  bool json = false;
  CommonOptions common;
};

int cmd_exact(const ExactArgs& a, std::ostream& out) {
  check_state(a.n, a.m);
  ExactEngine engine({.cap = resolve_cap(a.common.cap), .workers = resolve_workers(a.common.workers)});
  Rational value;
  std::string strategy;
  if (a.recurrence == "migdal") {
    value = engine.w_random(a.n, a.m);
    strategy = "RV";
  } else if (a.recurrence == "vlopt") {
    value = engine.w_vlopt(a.n, a.m);
    strategy = "VL_OPT";
  } else if (a.recurrence == "rvc") {
    try {
      value = engine.w_rvc(a.n, a.m);
    } catch (const EnumerationCapExceeded& e) {
      throw CommandError(kCapRefused, std::string(e.what()) + " (|Omega| = " + e.profiles().str() + ")");
    }
    strategy = "RVC";
  } else {
    throw CommandError(kUsage, "unknown --recurrence '" + a.recurrence + "' (migdal|rvc|vlopt)");
  }

  if (a.json) {
    out << to_json({OutputRecord::exact(a.n, a.m, strategy, value)}) << '\n';
  } else {
    out << a.recurrence << "(" << a.n << ", " << a.m << ") = " << to_fraction_string(value) << '\n'
        << "decimal: " << format_significant(value, kSignificantDigits) << '\n';
  }
  return kOk;
}

// simulate ------------------------------------------------------------------

struct SimulateArgs {
  int n = -1;
  int m = -1;
  std::string profile;
  std::uint64_t games = 0;
  std::uint64_t seed = 0;
  std::string csv;
  bool json = false;
  CommonOptions common;
};

int cmd_simulate(const SimulateArgs& a, std::ostream& out) {
  check_game(a.n, a.m);
  if (a.games < 1) throw CommandError(kUsage, "--games must be at least 1");
  const GameConfig config = make_config(a.n, a.m, resolve_profile(a.profile), a.common, a.seed);
  const BatchResult batch = run_batch(config, a.games, resolve_workers(a.common.workers));
  const OutputRecord record =
      OutputRecord::simulated(a.n, a.m, a.profile, batch.traitor_wins, batch.num_games, a.seed);

  if (a.json) {
    out << to_json({record}) << '\n';
  } else {
    out << a.profile << " TG(" << a.n << ", " << a.m << ")";
    if (uses_vote_left(config.profile)) out << " punish-timing=" << to_string(config.punish_timing);
    if (config.punish_compliance) out << " punish-compliance";
    out << '\n'
        << "traitor win rate: " << format_significant(batch.traitor_win_rate, 6) << "  95% Wilson CI ["
        << format_significant(batch.wilson_low, 6) << ", " << format_significant(batch.wilson_high, 6) << "]\n"
        << "traitor wins: " << batch.traitor_wins << "  faithful wins: " << batch.faithful_wins
        << "  games: " << batch.num_games << "  seed: " << a.seed << '\n'
        << "mean rounds: "
        << format_significant(static_cast<double>(batch.total_rounds) / static_cast<double>(batch.num_games), 6)
        << "  games with deviations: " << batch.games_with_deviation << '\n';
  }
  if (!a.csv.empty()) {
    auto file = open_output(a.csv);
    write_records_csv(file, {record});
    finish_output(file, a.csv);
  }
  return kOk;
}

// table ---------------------------------------------------------------------

struct TableArgs {
  std::uint64_t games = 0;
  std::uint64_t seed = 0;
  std::string configs;
  std::string out_path;
  CommonOptions common;
};

std::vector<TableRow> read_table_configs(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CommandError(kUsage, "cannot read '" + path + "'");
  std::vector<TableRow> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#' || line == "n,m") continue;
    std::istringstream fields(line);
    TableRow row{};
    char comma = 0;
    if (!(fields >> row.n >> comma >> row.m) || comma != ',' || !(fields >> std::ws).eof())
      throw CommandError(kUsage, "bad config line '" + line + "' (expected n,m)");
    check_game(row.n, row.m);
    rows.push_back(row);
  }
  if (rows.empty()) throw CommandError(kUsage, "no configurations in '" + path + "'");
  return rows;
}

std::string table_cell(const Rational& value) { return format_fixed(value, 3); }

int cmd_table(const TableArgs& a, std::ostream& out) {
  const auto rows = a.configs.empty() ? default_table_rows() : read_table_configs(a.configs);
  const int workers = resolve_workers(a.common.workers);
  ExactEngine engine({.cap = resolve_cap(a.common.cap), .workers = workers});

  auto simulate = [&](int n, int m, StrategyProfile profile) -> std::string {
    if (a.games == 0) return "--";
    const GameConfig config = make_config(n, m, profile, a.common, cell_seed(a.seed, n, m, profile));
    const BatchResult batch = run_batch(config, a.games, workers);
    return format_fixed(exact_from_double(batch.traitor_win_rate), 3);
  };

  auto file = open_output(a.out_path);
  file << kTableHeader << '\n';
  out << std::left << std::setw(9) << "(n, m)" << std::setw(8) << "w" << std::setw(8) << "RV" << std::setw(8)
      << "w_rvc" << std::setw(8) << "RV+C" << std::setw(8) << "w_vlopt" << "VL+Opt" << '\n';
  for (const TableRow& row : rows) {
    const Rational w = engine.w_random(row.n, row.m);
    const Rational wv = engine.w_vlopt(row.n, row.m);
    std::optional<Rational> wr;
    try {
      wr = engine.w_rvc(row.n, row.m);
    } catch (const EnumerationCapExceeded&) {
      // beyond the cap the exact cell is left as "--"
    }
    const std::string rv = simulate(row.n, row.m, StrategyProfile::RV);
    const std::string rvc = simulate(row.n, row.m, StrategyProfile::RVC);
    const std::string vlopt = simulate(row.n, row.m, StrategyProfile::VL_OPT);
    const std::string wr_cell = wr ? table_cell(*wr) : "--";

    file << row.n << ',' << row.m << ',' << table_cell(w) << ',' << rv << ',' << wr_cell << ',' << rvc << ','
         << table_cell(wv) << ',' << vlopt << ',' << to_fraction_string(w) << ','
         << (wr ? to_fraction_string(*wr) : "--") << ',' << to_fraction_string(wv) << '\n';
    const std::string label = "(" + std::to_string(row.n) + ", " + std::to_string(row.m) + ")";
    out << std::setw(9) << label << std::setw(8) << table_cell(w) << std::setw(8) << rv << std::setw(8) << wr_cell
        << std::setw(8) << rvc << std::setw(8) << table_cell(wv) << vlopt << '\n';
  }
  finish_output(file, a.out_path);
  return kOk;
}

// sweep ---------------------------------------------------------------------

struct SweepArgs {
  std::vector<int> m_list;
  std::string n_range;
  std::vector<std::string> profiles;
  std::uint64_t games = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  bool json = false;
  CommonOptions common;
};

std::pair<int, int> parse_range(const std::string& text) {
  const auto dots = text.find("..");
  try {
    std::size_t used = 0;
    if (dots == std::string::npos) {
      const int single = std::stoi(text, &used);
      if (used != text.size()) throw std::invalid_argument(text);
      return {single, single};
    }
    const std::string lo_text = text.substr(0, dots);
    const std::string hi_text = text.substr(dots + 2);
    const int lo = std::stoi(lo_text, &used);
    if (used != lo_text.size()) throw std::invalid_argument(text);
    const int hi = std::stoi(hi_text, &used);
    if (used != hi_text.size()) throw std::invalid_argument(text);
    return {lo, hi};
  } catch (const std::exception&) {
    throw CommandError(kUsage, "bad --n-range '" + text + "' (expected A..B)");
  }
}

std::optional<Rational> exact_traitor_rate(ExactEngine& engine, StrategyProfile profile, int n, int m) {
  switch (profile) {
    case StrategyProfile::RV:
    case StrategyProfile::VL_COMP:
      return engine.w_random(n, m);
    case StrategyProfile::VL_OPT:
      return engine.w_vlopt(n, m);
    case StrategyProfile::RVC:
      try {
        return engine.w_rvc(n, m);
      } catch (const EnumerationCapExceeded&) {
        return std::nullopt;
      }
    case StrategyProfile::VL_C:
      return std::nullopt;
  }
  return std::nullopt;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  if (a.m_list.empty()) throw CommandError(kUsage, "--m-list is empty");
  if (a.profiles.empty()) throw CommandError(kUsage, "--profiles is empty");
  const auto [n_lo, n_hi] = parse_range(a.n_range);
  if (n_lo > n_hi || n_lo < 2) throw CommandError(kUsage, "--n-range must be nonempty with n >= 2");
  std::vector<StrategyProfile> profiles;
  for (const auto& p : a.profiles) profiles.push_back(resolve_profile(p));
  for (int m : a.m_list)
    if (m < 1) throw CommandError(kUsage, "--m-list entries must be at least 1");

  const int workers = resolve_workers(a.common.workers);
  ExactEngine engine({.cap = resolve_cap(a.common.cap), .workers = workers});
  std::vector<OutputRecord> records;
  for (int m : a.m_list) {
    for (int n = std::max(n_lo, m + 1); n <= n_hi; ++n) {
      for (StrategyProfile profile : profiles) {
        const std::string name(to_string(profile));
        if (auto w = exact_traitor_rate(engine, profile, n, m)) records.push_back(OutputRecord::exact(n, m, name, 1 - *w));
        if (a.games > 0) {
          const std::uint64_t seed = cell_seed(a.seed, n, m, profile);
          const BatchResult batch = run_batch(make_config(n, m, profile, a.common, seed), a.games, workers);
          records.push_back(OutputRecord::simulated(n, m, name, batch.faithful_wins, batch.num_games, seed));
        }
      }
    }
  }
  if (records.empty()) throw CommandError(kUsage, "sweep produced no rows (check --m-list and --n-range)");

  auto file = open_output(a.out_path);
  if (a.json) {
    file << to_json(records) << '\n';
  } else {
    write_records_csv(file, records);
  }
  finish_output(file, a.out_path);
  out << "wrote " << records.size() << " rows to " << a.out_path << '\n';
  return kOk;
}

// ratios --------------------------------------------------------------------

struct RatiosArgs {
  std::string against;
  std::string sweep_file;
  std::string out_path;
};

/// Traitor-rate view of a sweep row (sweep rows hold Faithful rates).
RateEstimate estimate_from_sweep(const OutputRecord& r) {
  if (r.source == Source::Exact) return RateEstimate::from_exact(r.n, r.m, r.strategy, 1 - *r.value_exact);
  const std::uint64_t games = *r.num_games;
  const auto faithful = static_cast<std::uint64_t>(std::llround(r.value * static_cast<double>(games)));
  if (faithful > games) throw CommandError(kUsage, "sweep row has a rate above 1");
  return RateEstimate::from_counts(r.n, r.m, r.strategy, games - faithful, games);
}

int cmd_ratios(const RatiosArgs& a, std::ostream& out) {
  const StrategyProfile against = resolve_profile(a.against);
  if (against == StrategyProfile::VL_OPT) throw CommandError(kUsage, "--against must differ from VL_OPT");
  std::ifstream in(a.sweep_file);
  if (!in) throw CommandError(kUsage, "cannot read '" + a.sweep_file + "'");
  std::vector<OutputRecord> records;
  try {
    records = read_records_csv(in);
  } catch (const RecordFormatError& e) {
    throw CommandError(kUsage, a.sweep_file + ": " + e.what());
  }

  // exact rows win over simulated ones
  using Key = std::pair<int, int>;
  std::map<Key, OutputRecord> numerators;
  std::map<Key, OutputRecord> denominators;
  auto keep = [](std::map<Key, OutputRecord>& slot, const OutputRecord& r) {
    auto [it, inserted] = slot.emplace(Key{r.m, r.n}, r);
    if (!inserted && it->second.source == Source::Simulated && r.source == Source::Exact) it->second = r;
  };
  const std::string against_name(to_string(against));
  for (const auto& r : records) {
    if (r.strategy == "VL_OPT") keep(numerators, r);
    if (r.strategy == against_name) keep(denominators, r);
  }
  if (numerators.empty()) throw CommandError(kUsage, "sweep file has no VL_OPT rows");

  std::vector<RatioPoint> points;
  std::vector<Source> sources;
  for (const auto& [key, num] : numerators) {
    auto den = denominators.find(key);
    if (den == denominators.end())
      throw CommandError(kUsage, "missing " + against_name + " row for (n=" + std::to_string(num.n) +
                                     ", m=" + std::to_string(num.m) + ")");
    points.push_back(faithful_ratio(estimate_from_sweep(num), estimate_from_sweep(den->second)));
    const bool both_exact = num.source == Source::Exact && den->second.source == Source::Exact;
    sources.push_back(both_exact ? Source::Exact : Source::Simulated);
  }
  for (const auto& [key, den] : denominators)
    if (!numerators.contains(key))
      throw CommandError(kUsage, "missing VL_OPT row for (n=" + std::to_string(den.n) + ", m=" +
                                     std::to_string(den.m) + ")");

  auto file = open_output(a.out_path);
  write_ratios_csv(file, points, sources);
  finish_output(file, a.out_path);
  const auto omitted = std::count_if(points.begin(), points.end(), [](const RatioPoint& p) { return !p.ratio; });
  out << "wrote " << points.size() << " ratio points (" << omitted << " omitted) to " << a.out_path << '\n';
  return kOk;
}

}  // namespace

std::uint64_t cell_seed(std::uint64_t master, int n, int m, StrategyProfile profile) {
  const auto cell = (static_cast<std::uint64_t>(n) << 32) | (static_cast<std::uint64_t>(m) << 8) |
                    static_cast<std::uint64_t>(profile);
  return derive_seed(master, cell);
}

std::vector<TableRow> default_table_rows() {
  return {{7, 2}, {8, 2}, {9, 3}, {10, 3}, {11, 3}, {11, 5}, {15, 2},
          {20, 3}, {22, 3}, {24, 3}, {25, 3}, {22, 4}, {25, 4}};
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact and simulated Traitor win probabilities for TG(n, m)", "backstab"};
  app.require_subcommand(1);

  ExactArgs exact;
  auto* exact_cmd = app.add_subcommand("exact", "Exact win probability from a recurrence");
  exact_cmd->add_option("--recurrence", exact.recurrence, "migdal | rvc | vlopt")->required();
  exact_cmd->add_option("--n", exact.n, "Players")->required();
  exact_cmd->add_option("--m", exact.m, "Traitors")->required();
  exact_cmd->add_flag("--json", exact.json, "Emit a JSON record");
  add_common(*exact_cmd, exact.common, false);

  SimulateArgs sim;
  auto* sim_cmd = app.add_subcommand("simulate", "Monte Carlo batch for one configuration");
  sim_cmd->add_option("--n", sim.n, "Players")->required();
  sim_cmd->add_option("--m", sim.m, "Traitors")->required();
  sim_cmd->add_option("--profile", sim.profile, "RV | RVC | VL_COMP | VL_C | VL_OPT")->required();
  sim_cmd->add_option("--games", sim.games, "Number of games")->required();
  sim_cmd->add_option("--seed", sim.seed, "Master seed")->required();
  sim_cmd->add_option("--csv", sim.csv, "Also write the record as CSV");
  sim_cmd->add_flag("--json", sim.json, "Print a JSON record instead of text");
  add_common(*sim_cmd, sim.common, true);

  TableArgs table;
  auto* table_cmd = app.add_subcommand("table", "Win probabilities for the standard configuration set");
  table_cmd->add_option("--games", table.games, "Games per simulated cell (0 skips simulation)")->required();
  table_cmd->add_option("--seed", table.seed, "Master seed")->required();
  table_cmd->add_option("--configs", table.configs, "File of n,m lines replacing the default set");
  table_cmd->add_option("--out", table.out_path, "CSV output path")->required();
  add_common(*table_cmd, table.common, true);

  SweepArgs sweep;
  auto* sweep_cmd = app.add_subcommand("sweep", "Faithful win rates over a grid, long format");
  sweep_cmd->add_option("--m-list", sweep.m_list, "Traitor counts, e.g. 2,3,4,5")->required()->delimiter(',');
  sweep_cmd->add_option("--n-range", sweep.n_range, "Player range A..B")->required();
  sweep_cmd->add_option("--profiles", sweep.profiles, "Profiles, e.g. RV,VL_OPT")->required()->delimiter(',');
  sweep_cmd->add_option("--games", sweep.games, "Games per simulated cell (0: exact rows only)")->required();
  sweep_cmd->add_option("--seed", sweep.seed, "Master seed")->required();
  sweep_cmd->add_option("--out", sweep.out_path, "Output path")->required();
  sweep_cmd->add_flag("--json", sweep.json, "Write JSON instead of CSV");
  add_common(*sweep_cmd, sweep.common, true);

  RatiosArgs ratios;
  auto* ratios_cmd = app.add_subcommand("ratios", "VL_OPT Faithful-win-rate ratios from a sweep file");
  ratios_cmd->add_option("--against", ratios.against, "RV | RVC | VL_COMP | VL_C")->required();
  ratios_cmd->add_option("--sweep-file", ratios.sweep_file, "CSV written by sweep")->required();
  ratios_cmd->add_option("--out", ratios.out_path, "CSV output path")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (*exact_cmd) return cmd_exact(exact, out);
    if (*sim_cmd) return cmd_simulate(sim, out);
    if (*table_cmd) return cmd_table(table, out);
    if (*sweep_cmd) return cmd_sweep(sweep, out);
    if (*ratios_cmd) return cmd_ratios(ratios, out);
  } catch (const CommandError& e) {
    err << "error: " << e.what() << '\n';
    return e.exit_code;
  } catch (const EnumerationCapExceeded& e) {
    err << "error: " << e.what() << '\n';
    return kCapRefused;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}

}  // namespace backstab::cli
