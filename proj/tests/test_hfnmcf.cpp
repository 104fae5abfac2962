#include "doctest.h"

#include "hfgtflow/errors.hpp"
#include "hfgtflow/hfnmcf.hpp"

using namespace hfgtflow;

namespace {

std::vector<OperandQuantity> water() { return {{"water", 1.0}}; }

// One transportation capability moving water from a to b.
SystemModel transfer_model(int duration = 0) {
  return build_system(
      {{"water", "water", false}},
      {{"a", "", ResourceKind::Transformation},
       {"b", "", ResourceKind::Transformation},
       {"truck", "", ResourceKind::Transportation}},
      {{"move", "", ProcessKind::RefinedTransportation, water(), water()}},
      {{"c_move", "truck", "move", "a", "b", duration}});
}

AssemblySpec basic_spec(std::size_t horizon, double dt) {
  AssemblySpec spec;
  spec.horizon = horizon;
  spec.dt = dt;
  spec.pins = {{"c_move", PinSide::Both, {2.0}}};
  spec.initial = {{StateSection::QB, 0, 10.0}, {StateSection::QB, 1, 0.0}};
  return spec;
}

} // namespace

TEST_CASE("the step layout packs sections in order") {
  StepLayout l;
  l.n_places = 2;
  l.n_transitions = 6;
  l.n_operand_places = 3;
  l.n_operand_transitions = 4;
  CHECK(l.q_b_off() == 0);
  CHECK(l.q_e_off() == 2);
  CHECK(l.q_sl_off() == 8);
  CHECK(l.q_el_off() == 11);
  CHECK(l.u_minus_off() == 15);
  CHECK(l.u_plus_off() == 21);
  CHECK(l.u_l_minus_off() == 27);
  CHECK(l.u_l_plus_off() == 31);
  CHECK(l.width() == 35);
}

TEST_CASE("zero durations consolidate firing sides through the alias map") {
  HfnmcfProblem p = assemble(transfer_model(0), basic_spec(3, 1.0));
  CHECK(p.firings_consolidated());
  const StepLayout &l = p.layout();
  const std::size_t W = l.width();
  for (std::size_t k = 0; k <= 3; ++k) {
    CHECK(p.alias()[k * W + l.u_plus_off()] == k * W + l.u_minus_off());
    CHECK(p.alias()[k * W + l.q_e_off()] == 0 * W + l.q_e_off());
  }
  CHECK(p.report().status_of("esn_duration") == BlockStatus::Collapsed);
  CHECK(p.report().status_of("esn_transition_marking") ==
        BlockStatus::Collapsed);
}

TEST_CASE("positive durations keep the marking and duration blocks") {
  HfnmcfProblem p = assemble(transfer_model(2), basic_spec(5, 1.0));
  CHECK(!p.firings_consolidated());
  CHECK(p.report().status_of("esn_duration") == BlockStatus::Active);
  CHECK(p.report().status_of("esn_transition_marking") == BlockStatus::Active);
  for (const auto &blk : p.blocks())
    if (blk.name == "esn_duration")
      CHECK(blk.a.rows == 3); // completions at k=2,3,4 only
}

TEST_CASE("the collapse report covers every block with a reason") {
  HfnmcfProblem p = assemble(transfer_model(0), basic_spec(3, 1.0));
  const CollapseReport &r = p.report();
  CHECK(r.blocks.size() == 16);
  CHECK(r.status_of("objective") == BlockStatus::Collapsed);
  CHECK(r.status_of("esn_continuity") == BlockStatus::Active);
  CHECK(r.status_of("esn_boundary") == BlockStatus::Active);
  CHECK(r.status_of("initial_conditions") == BlockStatus::Active);
  CHECK(r.status_of("operand_continuity") == BlockStatus::Collapsed);
  CHECK(r.status_of("sync_plus") == BlockStatus::Collapsed);
  CHECK(r.status_of("final_conditions") == BlockStatus::Collapsed);
  CHECK(r.status_of("capacity_bounds") == BlockStatus::Relaxed);
  CHECK(r.status_of("device_equality") == BlockStatus::Collapsed);
  for (const auto &b : r.blocks)
    if (b.status != BlockStatus::Active)
      CHECK(!b.reason.empty());
  CHECK(r.to_text().find("esn_continuity: active") != std::string::npos);
  CHECK_THROWS_AS(r.status_of("no_such_block"), Error);
}

TEST_CASE("a hand-propagated trajectory satisfies every equality block") {
  const std::size_t K = 4;
  const double dt = 0.5;
  HfnmcfProblem p = assemble(transfer_model(0), basic_spec(K, dt));
  const StepLayout &l = p.layout();
  const std::size_t W = l.width();

  Eigen::VectorXd x = Eigen::VectorXd::Zero(long(p.x_size()));
  double a = 10.0, b = 0.0;
  for (std::size_t k = 0; k <= K; ++k) {
    x(long(k * W + l.q_b_off() + 0)) = a;
    x(long(k * W + l.q_b_off() + 1)) = b;
    if (k < K) {
      x(long(k * W + l.u_minus_off())) = 2.0;
      x(long(k * W + l.u_plus_off())) = 2.0;
      a -= 2.0 * dt;
      b += 2.0 * dt;
    }
  }

  auto residuals = evaluate_residuals(p, x, Eigen::VectorXd());
  CHECK(max_equality_residual(residuals) < 1e-12);

  x(long(2 * W + l.q_b_off() + 0)) += 0.25;
  residuals = evaluate_residuals(p, x, Eigen::VectorXd());
  CHECK(max_equality_residual(residuals) > 0.2);
}

TEST_CASE("final conditions pin the terminal state and trailing firings") {
  AssemblySpec spec = basic_spec(3, 1.0);
  spec.final_conditions = std::vector<StatePin>{{StateSection::QB, 1, 6.0}};
  HfnmcfProblem p = assemble(transfer_model(0), spec);
  CHECK(p.report().status_of("final_conditions") == BlockStatus::Active);
  bool found = false;
  for (const auto &blk : p.blocks())
    if (blk.name == "final_conditions") {
      found = true;
      CHECK(blk.a.rows == 2); // the pinned state plus one trailing firing
      CHECK(blk.b(0) == 6.0);
    }
  CHECK(found);
}

TEST_CASE("spec validation rejects malformed problems") {
  SystemModel m = transfer_model(0);

  AssemblySpec bad = basic_spec(3, 1.0);
  bad.f_quad_diag = Eigen::VectorXd::Constant(3, 1.0);
  CHECK_THROWS_WITH_AS(assemble(m, bad), doctest::Contains("DimMismatch"),
                       Error);

  const long width =
      long(assemble(m, basic_spec(3, 1.0)).layout().width());
  bad = basic_spec(3, 1.0);
  bad.f_quad_diag = Eigen::VectorXd::Constant(width, -1.0);
  CHECK_THROWS_WITH_AS(assemble(m, bad), doctest::Contains("KindViolation"),
                       Error);

  bad = basic_spec(3, 1.0);
  bad.initial.push_back({StateSection::QB, 0, 5.0});
  CHECK_THROWS_WITH_AS(assemble(m, bad),
                       doctest::Contains("OverdeterminedInitialCondition"),
                       Error);

  bad = basic_spec(3, 1.0);
  bad.pins[0].series = {1.0, 2.0}; // neither broadcast nor full horizon
  CHECK_THROWS_WITH_AS(assemble(m, bad),
                       doctest::Contains("InconsistentHorizon"), Error);

  bad = basic_spec(3, 1.0);
  bad.initial[0].index = 99;
  CHECK_THROWS_WITH_AS(assemble(m, bad), doctest::Contains("DimMismatch"),
                       Error);

  bad = basic_spec(3, 1.0);
  BoxBounds bb;
  bb.x_slots = {0};
  bb.lower = Eigen::VectorXd::Constant(1, 2.0);
  bb.upper = Eigen::VectorXd::Constant(1, 1.0);
  bad.bounds = bb;
  CHECK_THROWS_WITH_AS(assemble(m, bad), doctest::Contains("KindViolation"),
                       Error);

  bad = basic_spec(3, 1.0);
  bad.aux_names = {"mirror"};
  bad.aux_mirrors = {{0, "missing_track"}};
  CHECK_THROWS_WITH_AS(assemble(m, bad),
                       doctest::Contains("DanglingReference"), Error);
}

TEST_CASE("exogenous tracks broadcast and length-check") {
  AssemblySpec spec = basic_spec(2, 1.0);
  spec.exogenous = {{"c", {7.0}}, {"t", {1.0, 2.0}}};
  HfnmcfProblem p = assemble(transfer_model(0), spec);
  CHECK(p.exogenous_at("c", 0) == 7.0);
  CHECK(p.exogenous_at("c", 5) == 7.0);
  CHECK(p.exogenous_at("t", 1) == 2.0);
  CHECK_THROWS_WITH_AS(p.exogenous_at("t", 2),
                       doctest::Contains("InconsistentHorizon"), Error);
  CHECK_THROWS_WITH_AS(p.exogenous_at("nope", 0),
                       doctest::Contains("DanglingReference"), Error);
}

TEST_CASE("place labels default to buffer ids for one operand") {
  HfnmcfProblem p = assemble(transfer_model(0), basic_spec(1, 1.0));
  CHECK(p.place_labels() == std::vector<std::string>{"a", "b"});
}
