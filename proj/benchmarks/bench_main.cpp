#include <benchmark/benchmark.h>

#include "hfgtflow/incidence.hpp"
#include "hfgtflow/monolake.hpp"
#include "hfgtflow/nets.hpp"
#include "hfgtflow/qp_solver.hpp"
#include "hfgtflow/sd_engine.hpp"

namespace {

using namespace hfgtflow;

ExogenousSeries fixture_series(std::size_t k) {
  return {std::vector<double>(k, 1.2), std::vector<double>(k, 18.0),
          std::vector<double>(k, 150.0)};
}

MonoParams fixture_params() {
  MonoParams p;
  p.v_gwwith = 6.8;
  return p;
}

void bm_matricize(benchmark::State &state) {
  MonoLakeBundle b = build_monolake(fixture_params(), fixture_series(8), 8);
  for (auto _ : state) {
    auto [neg, pos] = build_hfits(b.system);
    benchmark::DoNotOptimize(matricize(neg, pos));
  }
}
BENCHMARK(bm_matricize);

void bm_esn_step(benchmark::State &state) {
  MonoLakeBundle b = build_monolake(fixture_params(), fixture_series(8), 8);
  auto [neg, pos] = build_hfits(b.system);
  IncidenceMatrices inc = matricize(neg, pos);
  NetMarking marking;
  marking.q_b = Eigen::Vector2d(2228.0, 6800.0);
  marking.q_e = Eigen::VectorXd::Zero(6);
  Eigen::VectorXd u(6);
  u << 39.9, 134.0, 110.0, 6.8, 22.3, 0.0;
  for (auto _ : state)
    benchmark::DoNotOptimize(esn_step(marking, u, u, inc, 1.0));
}
BENCHMARK(bm_esn_step);

void bm_run_sd(benchmark::State &state) {
  MonoLakeBundle b =
      build_monolake(fixture_params(), fixture_series(100), 100);
  for (auto _ : state)
    benchmark::DoNotOptimize(run_sd(b.stockflow));
}
BENCHMARK(bm_run_sd);

void bm_forward_propagate(benchmark::State &state) {
  MonoLakeBundle b =
      build_monolake(fixture_params(), fixture_series(100), 100);
  HfnmcfProblem problem = assemble(b.system, b.assembly);
  for (auto _ : state)
    benchmark::DoNotOptimize(forward_propagate(problem));
}
BENCHMARK(bm_forward_propagate);

void bm_equality_qp(benchmark::State &state) {
  const long n = 8;
  Eigen::VectorXd fq = Eigen::VectorXd::Constant(n, 2.0);
  Eigen::VectorXd fl = Eigen::VectorXd::LinSpaced(n, -1.0, 1.0);
  CooMatrix a;
  a.rows = 3;
  a.cols = std::size_t(n);
  for (std::size_t r = 0; r < 3; ++r)
    for (std::size_t c = 0; c < std::size_t(n); ++c)
      a.add(r, c, double((r * 7 + c * 3) % 5) - 2.0);
  a.sort_and_combine();
  Eigen::VectorXd b(3);
  b << 1.0, -2.0, 0.5;
  for (auto _ : state)
    benchmark::DoNotOptimize(solve_equality_qp(fq, fl, a, b));
}
BENCHMARK(bm_equality_qp);

} // namespace

BENCHMARK_MAIN();
