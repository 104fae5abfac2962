#include "doctest.h"

#include <cmath>
#include <random>

#include "hfgtflow/errors.hpp"
#include "hfgtflow/sd_engine.hpp"
#include "oracles.hpp"

using namespace hfgtflow;

namespace {

Flow make_flow(const std::string &name, const std::string &source,
               const std::string &sink, const std::string &rate) {
  return {name, source, sink, parse_expr(rate)};
}

} // namespace

TEST_CASE("a constant boundary inflow integrates linearly") {
  StockFlowModel m;
  m.stocks = {{"tank", 10.0, "kaf"}};
  m.flows = {make_flow("fill", kBoundary, "tank", "2.5")};
  m.dt = 0.5;
  m.horizon = 4;

  Trajectory t = run_sd(m);
  REQUIRE(t.steps() == 5);
  auto tank = t.column("tank");
  for (std::size_t k = 0; k <= 4; ++k)
    CHECK(tank[k] == doctest::Approx(10.0 + 2.5 * 0.5 * double(k)));
  auto fill = t.column("fill");
  CHECK(fill[0] == 2.5);
  CHECK(fill[4] == 0.0); // no rate is applied after the final state
}

TEST_CASE("columns are k, stocks, flows, auxiliaries in declaration order") {
  StockFlowModel m;
  m.stocks = {{"a", 0.0, ""}, {"b", 0.0, ""}};
  m.flows = {make_flow("f", "a", "b", "1")};
  m.auxiliaries = {{"x", parse_expr("a + b")}};
  m.horizon = 1;
  Trajectory t = run_sd(m);
  REQUIRE(t.columns() ==
          std::vector<std::string>{"k", "a", "b", "f", "x"});
}

TEST_CASE("internal flows conserve mass and boundary flows account for the rest") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 10; ++trial) {
    StockFlowModel m;
    m.stocks = {{"a", oracles::uniform(rng, 10.0, 50.0), ""},
                {"b", oracles::uniform(rng, 10.0, 50.0), ""},
                {"c", oracles::uniform(rng, 10.0, 50.0), ""}};
    m.constants = {{"r1", oracles::uniform(rng, 0.0, 2.0)},
                   {"r2", oracles::uniform(rng, 0.0, 2.0)},
                   {"rin", oracles::uniform(rng, 0.0, 2.0)},
                   {"rout", oracles::uniform(rng, 0.0, 2.0)}};
    m.flows = {make_flow("ab", "a", "b", "r1"),
               make_flow("bc", "b", "c", "r2"),
               make_flow("in", kBoundary, "a", "rin"),
               make_flow("out", "c", kBoundary, "rout")};
    m.dt = 0.25;
    m.horizon = 12;

    Trajectory t = run_sd(m);
    const auto &rows = t.rows();
    double total0 = rows.front()[1] + rows.front()[2] + rows.front()[3];
    double totalK = rows.back()[1] + rows.back()[2] + rows.back()[3];
    const auto in_col = std::size_t(t.column_index("in"));
    const auto out_col = std::size_t(t.column_index("out"));
    double boundary = 0.0;
    for (std::size_t k = 0; k < m.horizon; ++k)
      boundary += (rows[k][in_col] - rows[k][out_col]) * m.dt;
    CHECK(totalK - total0 == doctest::Approx(boundary).epsilon(1e-12));
  }
}

TEST_CASE("auxiliaries evaluate in dependency order") {
  StockFlowModel m;
  m.stocks = {{"v", 4.0, ""}};
  // Declared out of order on purpose: third depends on second on first.
  m.auxiliaries = {{"z", parse_expr("y * 2")},
                   {"y", parse_expr("x + 1")},
                   {"x", parse_expr("v / 2")}};
  m.flows = {make_flow("drain", "v", kBoundary, "z")};
  m.horizon = 1;
  Trajectory t = run_sd(m);
  CHECK(t.column("x")[0] == 2.0);
  CHECK(t.column("y")[0] == 3.0);
  CHECK(t.column("z")[0] == 6.0);
  CHECK(t.column("v")[1] == 4.0 - 6.0);
}

TEST_CASE("cyclic auxiliaries are rejected") {
  StockFlowModel m;
  m.stocks = {{"v", 1.0, ""}};
  m.auxiliaries = {{"p", parse_expr("q + 1")}, {"q", parse_expr("p + 1")}};
  m.horizon = 1;
  try {
    run_sd(m);
    FAIL("expected a cycle error");
  } catch (const Error &e) {
    CHECK(e.code() == errc::cyclic_auxiliary);
  }
}

TEST_CASE("lookups interpolate linearly and clamp at the ends") {
  StockFlowModel m;
  m.stocks = {{"v", 5.0, ""}};
  m.lookups = {{"gain", "v", {0.0, 10.0}, {1.0, 3.0}}};
  m.auxiliaries = {{"g", parse_expr("gain")}};
  m.horizon = 1;
  CHECK(run_sd(m).column("g")[0] == doctest::Approx(2.0));

  m.stocks[0].initial = -5.0;
  CHECK(run_sd(m).column("g")[0] == 1.0);
  m.stocks[0].initial = 25.0;
  CHECK(run_sd(m).column("g")[0] == 3.0);
}

TEST_CASE("a zero horizon yields only the initial row") {
  StockFlowModel m;
  m.stocks = {{"v", 7.0, ""}};
  m.flows = {make_flow("f", "v", kBoundary, "1")};
  m.horizon = 0;
  Trajectory t = run_sd(m);
  REQUIRE(t.steps() == 1);
  CHECK(t.column("v")[0] == 7.0);
  CHECK(t.column("f")[0] == 0.0);
}

TEST_CASE("a proportional outflow declines geometrically") {
  StockFlowModel m;
  m.stocks = {{"v", 100.0, ""}};
  m.flows = {make_flow("leak", "v", kBoundary, "0.01 * v")};
  m.horizon = 50;
  Trajectory t = run_sd(m);
  auto v = t.column("v");
  for (std::size_t k = 0; k <= 50; ++k)
    CHECK(v[k] ==
          doctest::Approx(100.0 * std::pow(0.99, double(k))).epsilon(1e-12));
}

TEST_CASE("exogenous tracks override constants and must cover the horizon") {
  StockFlowModel m;
  m.stocks = {{"v", 0.0, ""}};
  m.constants = {{"rate", 100.0}};
  m.exogenous = {{"rate", {1.0, 2.0, 3.0}}};
  m.flows = {make_flow("in", kBoundary, "v", "rate")};
  m.horizon = 3;
  Trajectory t = run_sd(m);
  CHECK(t.column("v")[3] == doctest::Approx(6.0));

  m.horizon = 4;
  try {
    run_sd(m);
    FAIL("expected a short-track error");
  } catch (const Error &e) {
    CHECK(e.code() == errc::inconsistent_horizon);
  }
}

TEST_CASE("dangling flow endpoints and names are rejected") {
  StockFlowModel m;
  m.stocks = {{"v", 0.0, ""}};
  m.flows = {make_flow("f", "missing", "v", "1")};
  m.horizon = 1;
  CHECK_THROWS_WITH_AS(run_sd(m), doctest::Contains("DanglingReference"),
                       Error);

  m.flows = {make_flow("f", kBoundary, "v", "no_such_name")};
  CHECK_THROWS_WITH_AS(run_sd(m), doctest::Contains("DanglingReference"),
                       Error);
}

TEST_CASE("non-finite rates stop the run with a stable code") {
  StockFlowModel m;
  m.stocks = {{"v", 0.0, ""}};
  m.flows = {make_flow("f", kBoundary, "v", "1 / v")};
  m.horizon = 1;
  try {
    run_sd(m);
    FAIL("expected an arithmetic error");
  } catch (const Error &e) {
    CHECK(e.code() == errc::division_by_zero);
  }
}
