#include <doctest.h>

#include <sstream>

#include <json.hpp>

#include "backstab/exact_engine.hpp"
#include "backstab/records.hpp"

using namespace backstab;

TEST_CASE("decimal rendering rounds half to even") {
  CHECK(format_fixed(Rational(1, 8), 2) == "0.12");
  CHECK(format_fixed(Rational(3, 8), 2) == "0.38");
  CHECK(format_fixed(Rational(5, 2), 0) == "2");
  CHECK(format_fixed(Rational(7, 2), 0) == "4");
  CHECK(format_fixed(Rational(1), 3) == "1.000");
  CHECK(format_fixed(Rational(0), 3) == "0.000");
  CHECK(format_fixed(Rational(-1, 8), 2) == "-0.12");
  CHECK(format_significant(Rational(2110959, 3380195), 12) == "0.624508053529");
  CHECK(format_significant(Rational(1), 12) == "1.00000000000");
  CHECK(format_significant(Rational(0), 12) == "0");
  CHECK(format_significant(Rational(1, 3000), 3) == "0.000333");
  // rounding that carries into a new leading digit
  CHECK(format_significant(Rational(9999, 10000), 3) == "1.00");
  CHECK(format_significant(0.5, 4) == "0.5000");
}

TEST_CASE("fractions parse back") {
  CHECK(parse_fraction("2110959/3380195") == Rational(2110959, 3380195));
  CHECK(parse_fraction("1") == 1);
  CHECK(parse_fraction("4/8") == Rational(1, 2));
  CHECK_THROWS_AS(parse_fraction("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_fraction("a/2"), std::invalid_argument);
  CHECK_THROWS_AS(parse_fraction(""), std::invalid_argument);
  CHECK(to_fraction_string(Rational(6, 4)) == "3/2");
}

TEST_CASE("record rows") {
  const OutputRecord exact = OutputRecord::exact(25, 3, "RV", w_random(25, 3));
  CHECK(to_csv_row(exact) == "25,3,RV,exact,0.624508053529,2110959/3380195,,,,");

  const OutputRecord sim = OutputRecord::simulated(7, 2, "RVC", 896, 1000, 42);
  const std::string row = to_csv_row(sim);
  CHECK(row.rfind("7,2,RVC,simulated,0.896000000000,,", 0) == 0);
  CHECK(row.substr(row.size() - 8) == ",1000,42");
}

TEST_CASE("CSV round-trips byte for byte") {
  Rng rng(5);
  std::vector<OutputRecord> records;
  for (int n = 3; n <= 25; ++n) {
    const int m = 1 + uniform_index(rng, n - 1);
    records.push_back(OutputRecord::exact(n, m, "VL_OPT", 1 - w_vlopt(n, m)));
    const std::uint64_t games = 1 + static_cast<std::uint64_t>(uniform_index(rng, 2'000'000));
    const std::uint64_t wins = static_cast<std::uint64_t>(uniform_index(rng, static_cast<int>(games) + 1));
    records.push_back(OutputRecord::simulated(n, m, "RV", wins, games, derive_seed(1, static_cast<std::uint64_t>(n))));
  }
  records.push_back(OutputRecord::simulated(9, 3, "RVC", 0, 10, 1));
  records.push_back(OutputRecord::simulated(9, 3, "RVC", 10, 10, 1));

  std::ostringstream first;
  write_records_csv(first, records);
  std::istringstream in(first.str());
  const auto parsed = read_records_csv(in);
  REQUIRE(parsed.size() == records.size());
  std::ostringstream second;
  write_records_csv(second, parsed);
  CHECK(second.str() == first.str());
  CHECK(first.str().find('\r') == std::string::npos);
}

TEST_CASE("malformed CSV is rejected") {
  std::istringstream no_header("1,2,RV,exact,0.5,1/2,,,,\n");
  CHECK_THROWS_AS(read_records_csv(no_header), RecordFormatError);
  CHECK_THROWS_AS(parse_csv_row("7,2,RV,exact,0.5,,,,,"), RecordFormatError);
  CHECK_THROWS_AS(parse_csv_row("7,2,RV,guess,0.5,1/2,,,,"), RecordFormatError);
  CHECK_THROWS_AS(parse_csv_row("7,2,RV,simulated,0.5,,0.4,0.6,,1"), RecordFormatError);
  CHECK_THROWS_AS(parse_csv_row("7,2,RV,exact,0.5,1/2,,,"), RecordFormatError);
  CHECK_THROWS_AS(parse_csv_row("x,2,RV,exact,0.5,1/2,,,,"), RecordFormatError);
}

TEST_CASE("JSON mirrors the CSV fields") {
  const auto json = nlohmann::json::parse(to_json({OutputRecord::exact(22, 4, "RV", w_random(22, 4)),
                                                   OutputRecord::simulated(7, 2, "RV", 771, 1000, 9)}));
  REQUIRE(json.is_array());
  REQUIRE(json.size() == 2);
  std::vector<std::string> keys;
  for (auto it = json[0].begin(); it != json[0].end(); ++it) keys.push_back(it.key());
  std::sort(keys.begin(), keys.end());
  std::vector<std::string> header{"n", "m", "strategy", "source", "value", "value_exact", "ci_low", "ci_high", "num_games", "seed"};
  std::sort(header.begin(), header.end());
  CHECK(keys == header);
  CHECK(json[0]["value_exact"] == "311471/360448");
  CHECK(json[0]["ci_low"].is_null());
  CHECK(json[1]["num_games"] == 1000);
  CHECK(json[1]["seed"] == 9);
  CHECK(json[1]["value_exact"].is_null());
}
