#include "doctest.h"

#include "hfgtflow/core_model.hpp"
#include "hfgtflow/errors.hpp"
#include "hfgtflow/incidence.hpp"

using namespace hfgtflow;

namespace {

std::vector<OperandQuantity> water() { return {{"water", 1.0}}; }

SystemModel two_buffer_model() {
  return build_system(
      {{"water", "water", false}},
      {{"a", "", ResourceKind::Transformation},
       {"truck", "", ResourceKind::Transportation},
       {"b", "", ResourceKind::IndependentBuffer}},
      {{"move", "", ProcessKind::RefinedTransportation, water(), water()},
       {"make", "", ProcessKind::Transformation, water(), water()}},
      {{"c_move", "truck", "move", "a", "b", 2},
       {"c_make", "a", "make", "a", "a", 0}});
}

} // namespace

TEST_CASE("canonical indices follow declaration order") {
  SystemModel m = two_buffer_model();
  CHECK(m.operand_count() == 1);
  CHECK(m.buffer_count() == 2);
  CHECK(m.capability_count() == 2);
  CHECK(m.operand_index("water") == 0);
  CHECK(m.buffer_index("a") == 0);
  CHECK(m.buffer_index("b") == 1);
  CHECK(m.capability_index("c_move") == 0);
  CHECK(m.capability_index("c_make") == 1);

  auto buffers = m.buffers();
  REQUIRE(buffers.size() == 2);
  CHECK(buffers[0].id == "a");
  CHECK(buffers[1].id == "b"); // transportation resource is skipped
}

TEST_CASE("duplicate ids are rejected") {
  CHECK_THROWS_WITH_AS(
      build_system({{"w", "", false}, {"w", "", false}}, {}, {}, {}),
      doctest::Contains("DuplicateId"), Error);
}

TEST_CASE("the environment id is reserved") {
  CHECK_THROWS_AS(build_system({{"w", "", false}},
                               {{"environment", "", ResourceKind::Transformation}},
                               {}, {}),
                  Error);
}

TEST_CASE("dangling references are rejected") {
  CHECK_THROWS_WITH_AS(
      build_system({{"w", "", false}},
                    {{"a", "", ResourceKind::Transformation}},
                    {{"p", "", ProcessKind::Transformation,
                      {{"missing", 1.0}}, {{"w", 1.0}}}},
                    {{"c", "a", "p", "a", "a", 0}}),
      doctest::Contains("DanglingReference"), Error);
}

TEST_CASE("negative durations are rejected") {
  CHECK_THROWS_AS(
      build_system({{"w", "", false}},
                    {{"a", "", ResourceKind::Transformation}},
                    {{"p", "", ProcessKind::Transformation,
                      {{"w", 1.0}}, {{"w", 1.0}}}},
                    {{"c", "a", "p", "a", "a", -1}}),
      Error);
}

TEST_CASE("a non-transportation capability cannot span two buffers") {
  CHECK_THROWS_WITH_AS(
      build_system({{"w", "", false}},
                    {{"a", "", ResourceKind::Transformation},
                     {"b", "", ResourceKind::Transformation}},
                    {{"p", "", ProcessKind::Transformation,
                      {{"w", 1.0}}, {{"w", 1.0}}}},
                    {{"c", "a", "p", "a", "b", 0}}),
      doctest::Contains("KindViolation"), Error);
}

TEST_CASE("capability endpoints must be buffers or the environment") {
  CHECK_THROWS_AS(
      build_system({{"w", "", false}},
                    {{"a", "", ResourceKind::Transformation},
                     {"truck", "", ResourceKind::Transportation}},
                    {{"p", "", ProcessKind::Transformation,
                      {{"w", 1.0}}, {{"w", 1.0}}}},
                    {{"c", "a", "p", "truck", "a", 0}}),
      Error);
}

TEST_CASE("tensor entries accumulate and stay sorted") {
  Hfit t(TensorSign::Positive, 2, 2, 3);
  t.add(1, 1, 2, 1.0);
  t.add(0, 0, 0, 2.0);
  t.add(0, 0, 0, 0.5);
  CHECK(t.at(0, 0, 0) == 2.5);
  CHECK(t.at(1, 1, 2) == 1.0);
  CHECK(t.at(1, 0, 0) == 0.0);
  CHECK(t.entries().size() == 2);
  CHECK(t.dump_coordinates() == "0 0 0 2.5\n1 1 2 1\n");
  CHECK_THROWS_AS(t.add(2, 0, 0, 1.0), Error);
  CHECK_THROWS_AS(t.add(0, 0, 0, -1.0), Error);
}

TEST_CASE("matricization uses buffer-major place rows") {
  SystemModel m = two_buffer_model();
  auto [neg, pos] = build_hfits(m);
  IncidenceMatrices inc = matricize(neg, pos);
  CHECK(inc.place_count() == 2);
  CHECK(inc.capability_count() == 2);
  CHECK(inc.place_row(0, 1) == 1);

  Eigen::MatrixXd mp = inc.m_plus.dense();
  Eigen::MatrixXd mm = inc.m_minus.dense();
  // c_move: a -> b, c_make: a -> a.
  CHECK(mp(1, 0) == 1.0);
  CHECK(mm(0, 0) == 1.0);
  CHECK(mp(0, 1) == 1.0);
  CHECK(mm(0, 1) == 1.0);
  CHECK(inc.m.dense() == (mp - mm));
}

TEST_CASE("mismatched tensors cannot be matricized") {
  Hfit a(TensorSign::Negative, 1, 1, 1);
  Hfit b(TensorSign::Positive, 1, 2, 1);
  CHECK_THROWS_WITH_AS(matricize(a, b), doctest::Contains("DimMismatch"),
                       Error);
}
