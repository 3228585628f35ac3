#pragma once

// Long-format result records shared by the CLI commands.
//
// CSV: UTF-8, comma separated, LF line endings, header
//   n,m,strategy,source,value,value_exact,ci_low,ci_high,num_games,seed
// Exact records leave ci_low, ci_high, num_games and seed empty; simulated
// records leave value_exact empty. Decimals carry 12 significant digits.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "backstab/rational.hpp"
#include "backstab/stats.hpp"

namespace backstab {

inline constexpr std::string_view kRecordHeader = "n,m,strategy,source,value,value_exact,ci_low,ci_high,num_games,seed";
inline constexpr std::string_view kRatioHeader = "n,m,numerator_strategy,denominator_strategy,source,ratio,ratio_exact";
inline constexpr int kSignificantDigits = 12;

enum class Source : std::uint8_t { Exact, Simulated };

std::string_view to_string(Source source);

class RecordFormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct OutputRecord {
  int n = 0;
  int m = 0;
  std::string strategy;
  Source source = Source::Exact;
  double value = 0.0;
  std::optional<Rational> value_exact;
  std::optional<double> ci_low;
  std::optional<double> ci_high;
  std::optional<std::uint64_t> num_games;
  std::optional<std::uint64_t> seed;

  static OutputRecord exact(int n, int m, std::string strategy, const Rational& value);
  /// `successes` out of `trials`, with a 95% Wilson interval.
  static OutputRecord simulated(int n, int m, std::string strategy, std::uint64_t successes,
                                std::uint64_t trials, std::uint64_t seed);
};

std::string to_csv_row(const OutputRecord& record);
OutputRecord parse_csv_row(std::string_view line);

void write_records_csv(std::ostream& out, const std::vector<OutputRecord>& records);
/// Reads a file written by write_records_csv; the header must match exactly.
std::vector<OutputRecord> read_records_csv(std::istream& in);

std::string to_json(const std::vector<OutputRecord>& records);

void write_ratios_csv(std::ostream& out, const std::vector<RatioPoint>& points, const std::vector<Source>& sources);

}  // namespace backstab
