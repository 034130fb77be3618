#include <catch2/catch_amalgamated.hpp>

#include <cstdlib>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "ampbench/sweep.hpp"

using namespace ampbench;
using Catch::Matchers::WithinAbs;

namespace {

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> fields;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) fields.push_back(field);
    rows.push_back(fields);
  }
  return rows;
}

}  // namespace

TEST_CASE("sweep values on the reference grid") {
  SweepConfig config;
  config.g_values = {2.0};
  config.lambda_values = {0.0, 1.0, 2.0, 3.0, 5.0};
  config.quantities = {"cft"};
  const std::vector<ResultRow> rows = run_sweep(config);
  REQUIRE(rows.size() == 5);
  const double expected[] = {0.2, 1.0 / 3.0, 3.0 / 7.0, 0.5, 0.6};
  for (int i = 0; i < 5; ++i) {
    REQUIRE(rows[i].quantity == "cft");
    REQUIRE_THAT(rows[i].value, WithinAbs(expected[i], 1e-11));
  }
}

TEST_CASE("gap column and its large-gain decay") {
  SweepConfig config;
  config.g_values = {2.0, 4.0, 8.0, 16.0};
  config.lambda_values = {5.0};
  config.quantities = {"norm_gap"};
  const std::vector<ResultRow> rows = run_sweep(config);
  REQUIRE(rows.size() == 4);
  REQUIRE_THAT(rows[0].value, WithinAbs(0.4, 1e-11));  // 1 - 0.6 at (2, 5)
  for (std::size_t i = 1; i < rows.size(); ++i)
    REQUIRE(rows[i].value < rows[i - 1].value);
  REQUIRE(rows.back().value < 0.03);
}

TEST_CASE("rows come back in deterministic grid order") {
  SweepConfig config;
  config.g_values = {2.0, 3.0};
  config.lambda_values = {0.0, 1.0};
  config.quantities = {"f_det", "cft"};
  const std::vector<ResultRow> rows = run_sweep(config);
  REQUIRE(rows.size() == 8);
  REQUIRE(rows[0].g == 2.0);
  REQUIRE(rows[0].lambda == 0.0);
  REQUIRE(rows[0].quantity == "f_det");
  REQUIRE(rows[1].quantity == "cft");
  REQUIRE(rows[2].lambda == 1.0);
  REQUIRE(rows[4].g == 3.0);

  // and identically under a thread cap
  setenv("AMPBENCH_THREADS", "1", 1);
  const std::vector<ResultRow> serial = run_sweep(config);
  unsetenv("AMPBENCH_THREADS");
  REQUIRE(serial.size() == rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    REQUIRE(serial[i].quantity == rows[i].quantity);
    REQUIRE(serial[i].value == rows[i].value);
  }
}

TEST_CASE("csv and json emissions parse to identical values") {
  SweepConfig config;
  config.g_values = {2.0, 3.0};
  config.lambda_values = {0.0, 0.7, 3.0};
  config.quantities = {"f_det", "f_prob", "cft", "norm_gap"};
  const std::vector<ResultRow> rows = run_sweep(config);

  const std::string csv = to_csv(rows);
  const auto parsed_csv = parse_csv(csv);
  REQUIRE(parsed_csv.size() == rows.size() + 1);
  REQUIRE(parsed_csv[0] ==
          std::vector<std::string>{"g", "lambda", "quantity", "value", "meta"});

  const nlohmann::json parsed_json = nlohmann::json::parse(to_json(rows));
  REQUIRE(parsed_json.size() == rows.size());

  for (std::size_t i = 0; i < rows.size(); ++i) {
    const auto& c = parsed_csv[i + 1];
    const auto& j = parsed_json[i];
    REQUIRE(std::strtod(c[0].c_str(), nullptr) == j["g"].get<double>());
    REQUIRE(std::strtod(c[1].c_str(), nullptr) == j["lambda"].get<double>());
    REQUIRE(c[2] == j["quantity"].get<std::string>());
    REQUIRE(std::strtod(c[3].c_str(), nullptr) == j["value"].get<double>());
    REQUIRE(c[4] == j["meta"].get<std::string>());
  }
}

TEST_CASE("twelve significant digits survive the round trip") {
  const double v = 1.0 / 3.0;
  REQUIRE(format12(v) == "0.333333333333");
  REQUIRE(round12(v) == std::strtod("0.333333333333", nullptr));
  REQUIRE(format12(round12(v)) == format12(v));
}

TEST_CASE("sweep config validation") {
  SweepConfig bad;
  bad.g_values = {0.5};
  bad.lambda_values = {1.0};
  bad.quantities = {"cft"};
  REQUIRE_THROWS_AS(run_sweep(bad), std::domain_error);

  SweepConfig unknown;
  unknown.g_values = {2.0};
  unknown.lambda_values = {1.0};
  unknown.quantities = {"nope"};
  REQUIRE_THROWS_AS(run_sweep(unknown), std::invalid_argument);

  SweepConfig empty;
  REQUIRE_THROWS_AS(run_sweep(empty), std::invalid_argument);
}
