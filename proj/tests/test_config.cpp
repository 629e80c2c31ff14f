#include <doctest.h>

#include <sstream>

#include "slowfast/config.hpp"
#include "slowfast/errors.hpp"
#include "slowfast/io.hpp"

using namespace slowfast;

TEST_CASE("config JSON round trip preserves every field") {
  RunConfig config;
  config.system_name = "example5";
  config.params = {{"alpha", 0.1}};
  config.x0 = -0.7;
  config.z0 = 1.0;
  config.eps = 2e-3;
  config.eps_ladder = {1e-2, 1e-3, 1e-4};
  config.e1_values = {0.1, 0.2, 0.3};
  config.alpha = 5e-4;
  config.x_exit = 0.9;
  config.grid_n = 512;
  config.degree = 3;
  config.mode = "pipeline";
  config.tol.rel = 1e-9;
  config.tol.abs = 1e-11;
  config.tol.max_steps = 1234567;
  config.out = "run.csv";

  const RunConfig reparsed = config_from_json(config_to_json(config));
  CHECK(reparsed == config);
  // serialization is stable: a second round trip is byte-identical
  CHECK(config_to_json(reparsed) == config_to_json(config));
}

TEST_CASE("config rejects unknown keys at every level") {
  CHECK_THROWS_AS(config_from_json(R"({"epsilon": 1e-3})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"system": {"label": "x"}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"tolerances": {"relative": 1e-8}})"), ConfigError);
  CHECK_THROWS_AS(config_from_json("not json"), ConfigError);
}

TEST_CASE("config validates ranges") {
  CHECK_THROWS_AS(config_from_json(R"({"eps": -1.0})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"mode": "sideways"})"), ConfigError);
  CHECK_THROWS_AS(config_from_json(R"({"eps_ladder": [1e-3, 1e-2]})"), ConfigError);
}

TEST_CASE("scalar E1 values are accepted") {
  const RunConfig config = config_from_json(R"({"E1": 0.25})");
  CHECK(config.e1_values == std::vector<double>{0.25});
}

TEST_CASE("ladder parsing: linear and log forms") {
  const std::vector<double> lin = parse_ladder("0.5:2.5:5");
  REQUIRE(lin.size() == 5);
  CHECK(lin.front() == 2.5);
  CHECK(lin.back() == 0.5);
  CHECK(lin[1] == doctest::Approx(2.0));

  const std::vector<double> log = parse_ladder("1e-4:1e-2:3log");
  REQUIRE(log.size() == 3);
  CHECK(log.front() == 1e-2);
  CHECK(log[1] == doctest::Approx(1e-3).epsilon(1e-12));
  CHECK(log.back() == 1e-4);

  CHECK_THROWS_AS(parse_ladder("nonsense"), ConfigError);
  CHECK_THROWS_AS(parse_ladder("2:1:5"), ConfigError);
}

TEST_CASE("fmt17 prints round-trippable doubles") {
  CHECK(fmt17(0.1) == "0.10000000000000001");
  CHECK(fmt17(1.0) == "1");
  CHECK(std::stod(fmt17(-0.5442904014743228)) == -0.5442904014743228);
}

TEST_CASE("csv writer emits the header and full-precision rows") {
  std::ostringstream out;
  const std::vector<std::string> header{"eps", "p_eps"};
  CsvWriter csv(out, header);
  csv.row(std::vector<double>{1e-3, 1.0000000001285718});
  CHECK(out.str() == "eps,p_eps\n0.001,1.0000000001285718\n");
}

TEST_CASE("system JSON carries name, params and domain") {
  const std::string j = system_to_json(builtin("example5", {{"alpha", 0.25}}));
  CHECK(j.find("\"name\":\"example5\"") != std::string::npos);
  CHECK(j.find("\"alpha\":0.25") != std::string::npos);
  CHECK(j.find("\"x_min\":-2.0") != std::string::npos);
  CHECK(j.find("\"z_max\":2.5") != std::string::npos);
}
