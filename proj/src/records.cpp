#include "backstab/records.hpp"

#include <charconv>
#include <istream>
#include <ostream>

#include <json.hpp>

namespace backstab {

namespace {

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

template <typename T>
T parse_number(std::string_view text, std::string_view field) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end)
    throw RecordFormatError("csv: bad " + std::string(field) + " '" + std::string(text) + "'");
  return value;
}

double parse_decimal(std::string_view text, std::string_view field) {
  // from_chars for double is missing from older libstdc++
  if (text.empty()) throw RecordFormatError("csv: empty " + std::string(field));
  std::string buffer(text);
  std::size_t used = 0;
  double value = 0.0;
  try {
    value = std::stod(buffer, &used);
  } catch (const std::exception&) {
    throw RecordFormatError("csv: bad " + std::string(field) + " '" + buffer + "'");
  }
  if (used != buffer.size()) throw RecordFormatError("csv: bad " + std::string(field) + " '" + buffer + "'");
  return value;
}

std::string format_value(const OutputRecord& r) {
  return r.value_exact ? format_significant(*r.value_exact, kSignificantDigits)
                       : format_significant(r.value, kSignificantDigits);
}

}  // namespace

std::string_view to_string(Source source) { return source == Source::Exact ? "exact" : "simulated"; }

OutputRecord OutputRecord::exact(int n, int m, std::string strategy, const Rational& value) {
  OutputRecord r;
  r.n = n;
  r.m = m;
  r.strategy = std::move(strategy);
  r.source = Source::Exact;
  r.value = to_double(value);
  r.value_exact = value;
  return r;
}

OutputRecord OutputRecord::simulated(int n, int m, std::string strategy, std::uint64_t successes,
                                     std::uint64_t trials, std::uint64_t seed) {
  const WilsonInterval ci = wilson(successes, trials);
  OutputRecord r;
  r.n = n;
  r.m = m;
  r.strategy = std::move(strategy);
  r.source = Source::Simulated;
  r.value = ci.point;
  r.ci_low = ci.low;
  r.ci_high = ci.high;
  r.num_games = trials;
  r.seed = seed;
  return r;
}

std::string to_csv_row(const OutputRecord& r) {
  std::string row = std::to_string(r.n) + "," + std::to_string(r.m) + "," + r.strategy + "," +
                    std::string(to_string(r.source)) + "," + format_value(r) + ",";
  if (r.value_exact) row += to_fraction_string(*r.value_exact);
  row += ",";
  if (r.ci_low) row += format_significant(*r.ci_low, kSignificantDigits);
  row += ",";
  if (r.ci_high) row += format_significant(*r.ci_high, kSignificantDigits);
  row += ",";
  if (r.num_games) row += std::to_string(*r.num_games);
  row += ",";
  if (r.seed) row += std::to_string(*r.seed);
  return row;
}

OutputRecord parse_csv_row(std::string_view line) {
  const auto f = split_fields(line);
  if (f.size() != 10) throw RecordFormatError("csv: expected 10 fields, got " + std::to_string(f.size()));
  OutputRecord r;
  r.n = parse_number<int>(f[0], "n");
  r.m = parse_number<int>(f[1], "m");
  if (f[2].empty()) throw RecordFormatError("csv: empty strategy");
  r.strategy = std::string(f[2]);
  if (f[3] == "exact") {
    r.source = Source::Exact;
  } else if (f[3] == "simulated") {
    r.source = Source::Simulated;
  } else {
    throw RecordFormatError("csv: unknown source '" + std::string(f[3]) + "'");
  }
  r.value = parse_decimal(f[4], "value");
  if (!f[5].empty()) {
    try {
      r.value_exact = parse_fraction(f[5]);
    } catch (const std::invalid_argument& e) {
      throw RecordFormatError(std::string("csv: bad value_exact: ") + e.what());
    }
  }
  if (!f[6].empty()) r.ci_low = parse_decimal(f[6], "ci_low");
  if (!f[7].empty()) r.ci_high = parse_decimal(f[7], "ci_high");
  if (!f[8].empty()) r.num_games = parse_number<std::uint64_t>(f[8], "num_games");
  if (!f[9].empty()) r.seed = parse_number<std::uint64_t>(f[9], "seed");

  if (r.source == Source::Exact && (!r.value_exact || r.ci_low || r.ci_high || r.num_games || r.seed))
    throw RecordFormatError("csv: exact record must carry value_exact and no CI, games or seed");
  if (r.source == Source::Simulated && (r.value_exact || !r.ci_low || !r.ci_high || !r.num_games || !r.seed))
    throw RecordFormatError("csv: simulated record must carry CI, games and seed and no value_exact");
  return r;
}

void write_records_csv(std::ostream& out, const std::vector<OutputRecord>& records) {
  out << kRecordHeader << '\n';
  for (const auto& r : records) out << to_csv_row(r) << '\n';
}

std::vector<OutputRecord> read_records_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kRecordHeader) throw RecordFormatError("csv: missing or wrong header");
  std::vector<OutputRecord> records;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    records.push_back(parse_csv_row(line));
  }
  return records;
}

std::string to_json(const std::vector<OutputRecord>& records) {
  nlohmann::ordered_json array = nlohmann::ordered_json::array();
  for (const auto& r : records) {
    nlohmann::ordered_json obj;
    obj["n"] = r.n;
    obj["m"] = r.m;
    obj["strategy"] = r.strategy;
    obj["source"] = std::string(to_string(r.source));
    obj["value"] = r.value;
    obj["value_exact"] = r.value_exact ? nlohmann::ordered_json(to_fraction_string(*r.value_exact)) : nullptr;
    obj["ci_low"] = r.ci_low ? nlohmann::ordered_json(*r.ci_low) : nullptr;
    obj["ci_high"] = r.ci_high ? nlohmann::ordered_json(*r.ci_high) : nullptr;
    obj["num_games"] = r.num_games ? nlohmann::ordered_json(*r.num_games) : nullptr;
    obj["seed"] = r.seed ? nlohmann::ordered_json(*r.seed) : nullptr;
    array.push_back(std::move(obj));
  }
  return array.dump(2);
}

void write_ratios_csv(std::ostream& out, const std::vector<RatioPoint>& points, const std::vector<Source>& sources) {
  if (points.size() != sources.size()) throw std::invalid_argument("ratios csv: one source per point");
  out << kRatioHeader << '\n';
  for (std::size_t i = 0; i < points.size(); ++i) {
    const RatioPoint& p = points[i];
    out << p.n << ',' << p.m << ',' << p.numerator_strategy << ',' << p.denominator_strategy << ','
        << to_string(sources[i]) << ',';
    if (p.ratio) out << (p.exact_ratio ? format_significant(*p.exact_ratio, kSignificantDigits)
                                       : format_significant(*p.ratio, kSignificantDigits));
    out << ',';
    if (p.exact_ratio) out << to_fraction_string(*p.exact_ratio);
    out << '\n';
  }
}

}  // namespace backstab
