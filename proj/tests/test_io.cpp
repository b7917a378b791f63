#include <cmath>
#include <limits>

#include "doctest.h"
#include "ttstar/errors.hpp"
#include "ttstar/json_io.hpp"

using namespace ttstar;

TEST_CASE("round trip through JSON") {
  const datamaps::AsymptoticData a{3, {0.3, 0.1}, {0.28409349752572993, -1e-300}};
  const auto j = io::Json::parse(io::dump(io::to_json(a)));
  const auto b = io::asymptotic_from_json(j);
  CHECK(b.n == 3);
  CHECK(b.gamma == a.gamma);
  CHECK(b.rho == a.rho);

  const datamaps::MonodromyData m{5, {-0.15, 0.05, 0.1}, {0.0, 1.0 / 3.0, -2.5}};
  const auto back = io::monodromy_from_json(io::Json::parse(io::dump(io::to_json(m))));
  CHECK(back.m == m.m);
  CHECK(back.log_e == m.log_e);
}

TEST_CASE("17 significant digits and null for non-finite") {
  io::Json j;
  j["x"] = 0.1;
  j["nan"] = std::numeric_limits<double>::quiet_NaN();
  j["list"] = {1.0, 2.5};
  const auto s = io::dump(j);
  CHECK(s.find("0.10000000000000001") != std::string::npos);
  CHECK(s.find("\"nan\": null") != std::string::npos);
  CHECK(s.find("[1, 2.5]") != std::string::npos);
}

TEST_CASE("malformed input") {
  CHECK_THROWS_AS(io::asymptotic_from_json(io::Json::parse(R"({"n": 3, "gamma": [0.1, 0.2]})")), ShapeError);
  CHECK_THROWS_AS(io::monodromy_from_json(io::Json::parse(R"({"m": [0.1], "log_e": [0]})")), ShapeError);
}
