// Release gate for the library: one self-contained check per shipping
// criterion, each printed as a single PASS/FAIL line. Exits nonzero when any
// criterion fails. Reference values come from hand derivations and the
// independent oracles in oracles.hpp, never from the code paths under test.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "hfgtflow/compare.hpp"
#include "hfgtflow/errors.hpp"
#include "hfgtflow/hfnmcf.hpp"
#include "hfgtflow/incidence.hpp"
#include "hfgtflow/model_io.hpp"
#include "hfgtflow/monolake.hpp"
#include "hfgtflow/nets.hpp"
#include "hfgtflow/qp_solver.hpp"
#include "hfgtflow/sd_engine.hpp"
#include "oracles.hpp"

using namespace hfgtflow;

namespace {

struct CriterionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void require(bool ok, const std::string &what) {
  if (!ok)
    throw CriterionFailure(what);
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

MonoParams scenario_params() {
  MonoParams p;
  p.v_gwwith = 6.8;
  p.v_gdis = 0.0;
  return p;
}

std::string read_fixture(const std::string &name) {
  std::ifstream in(std::string(HFGTFLOW_FIXTURE_DIR) + "/" + name);
  require(in.good(), "cannot open fixture " + name);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// ---------------------------------------------------------------------------
// 1. Incidence fidelity of the Mono Lake net.

void criterion_incidence() {
  MonoLakeBundle bundle =
      build_monolake(scenario_params(), {{1.2}, {18.0}, {150.0}}, 1);
  auto [neg, pos] = build_hfits(bundle.system);
  IncidenceMatrices inc = matricize(neg, pos);

  const double plus[2][6] = {{1, 1, 0, 0, 0, 1}, {0, 0, 0, 0, 1, 0}};
  const double minus[2][6] = {{0, 0, 1, 0, 1, 0}, {0, 0, 0, 1, 0, 1}};

  require(inc.place_count() == 2 && inc.capability_count() == 6,
          "incidence dimensions are " + fmt(double(inc.place_count())) + "x" +
              fmt(double(inc.capability_count())) + ", expected 2x6");
  Eigen::MatrixXd mp = inc.m_plus.dense();
  Eigen::MatrixXd mm = inc.m_minus.dense();
  Eigen::MatrixXd m = inc.m.dense();
  for (long r = 0; r < 2; ++r)
    for (long c = 0; c < 6; ++c) {
      require(mp(r, c) == plus[r][c], "M+ mismatch at (" + fmt(double(r)) +
                                          "," + fmt(double(c)) + ")");
      require(mm(r, c) == minus[r][c], "M- mismatch at (" + fmt(double(r)) +
                                           "," + fmt(double(c)) + ")");
      require(m(r, c) == plus[r][c] - minus[r][c],
              "M != M+ - M- at (" + fmt(double(r)) + "," + fmt(double(c)) +
                  ")");
    }
}

// ---------------------------------------------------------------------------
// 2. Cross-engine equivalence on the stochastic scenario.

void criterion_cross_engine() {
  MarkovSpec mk =
      to_markov(*parse_document(read_fixture("markov.model")).document);
  auto tracks = gen_exogenous(mk, 42, 100);
  ExogenousSeries series{tracks.at("precip_ft_yr"), tracks.at("temp"),
                         tracks.at("sgr_kaf_yr")};

  MonoLakeBundle bundle = build_monolake(scenario_params(), series, 100);
  Trajectory sd = run_sd(bundle.stockflow);

  HfnmcfProblem p = assemble(bundle.system, bundle.assembly);
  Solution s = solve(p);
  require(s.status == SolveStatus::Optimal, "net solve did not reach optimal");
  Trajectory net = solution_trajectory(p, s);

  CompareReport report =
      compare_trajectories(sd, net, {"V_Mono", "V_Aqui"}, 0.15);
  require(report.pass, "deviation exceeds the 0.15% acceptance threshold");
  for (const auto &vc : report.variables)
    require(vc.nrmse_pct <= 1e-6,
            vc.name + " nRMSE " + fmt(vc.nrmse_pct) +
                "% exceeds the 1e-6% bound for step-aligned integration");
}

// ---------------------------------------------------------------------------
// 3. Monotone drawdown and mass balance in a dry regime.

void criterion_drawdown() {
  const std::size_t K = 10;
  MonoLakeBundle bundle =
      build_monolake(scenario_params(), {{0.2}, {18.0}, {20.0}}, K);
  Trajectory t = run_sd(bundle.stockflow);
  require(t.steps() == K + 1, "unexpected trajectory length");

  auto col = [&](const char *name) { return t.column(name); };
  auto v_mono = col("V_Mono"), v_aqui = col("V_Aqui");
  auto v_p = col("V_P"), v_fpdp = col("V_FPDP"), v_evap = col("V_Evap");
  auto v_gw = col("V_GWWith"), v_perc = col("V_Perc"), v_gdis = col("V_GDis");

  double boundary_sum = 0.0;
  for (std::size_t k = 0; k < K; ++k) {
    const double in = v_p[k] + v_fpdp[k] + v_gdis[k];
    const double out = v_evap[k] + v_perc[k];
    require(out > in, "step " + fmt(double(k)) +
                          " is not in the drawdown regime (in " + fmt(in) +
                          ", out " + fmt(out) + ")");
    require(v_mono[k + 1] < v_mono[k],
            "lake volume fails to decrease at step " + fmt(double(k)));
    boundary_sum += v_p[k] + v_fpdp[k] - v_evap[k] - v_gw[k];
  }

  const double change =
      (v_mono[K] + v_aqui[K]) - (v_mono[0] + v_aqui[0]);
  const double scale = std::abs(v_mono[0]) + std::abs(v_aqui[0]);
  require(std::abs(change - boundary_sum) <= 1e-9 * scale,
          "mass balance residual " + fmt(std::abs(change - boundary_sum)));
}

// ---------------------------------------------------------------------------
// 4. Net semantics against the token-pushing oracle.

void criterion_net_semantics() {
  std::mt19937_64 rng(101);
  for (int trial = 0; trial < 200; ++trial) {
    const auto places = std::size_t(oracles::uniform_int(rng, 1, 5));
    const auto transitions = std::size_t(oracles::uniform_int(rng, 1, 4));

    oracles::DenseNet net;
    net.places = places;
    net.transitions = transitions;
    net.m_plus.assign(places, std::vector<double>(transitions, 0.0));
    net.m_minus.assign(places, std::vector<double>(transitions, 0.0));
    IncidenceMatrices inc;
    inc.n_operands = 1;
    inc.n_buffers = places;
    inc.m_plus.rows = inc.m_minus.rows = inc.m.rows = places;
    inc.m_plus.cols = inc.m_minus.cols = inc.m.cols = transitions;
    for (std::size_t p = 0; p < places; ++p)
      for (std::size_t t = 0; t < transitions; ++t) {
        net.m_plus[p][t] = double(oracles::uniform_int(rng, 0, 2));
        net.m_minus[p][t] = double(oracles::uniform_int(rng, 0, 2));
        if (net.m_plus[p][t] != 0.0) {
          inc.m_plus.add(p, t, net.m_plus[p][t]);
          inc.m.add(p, t, net.m_plus[p][t]);
        }
        if (net.m_minus[p][t] != 0.0) {
          inc.m_minus.add(p, t, net.m_minus[p][t]);
          inc.m.add(p, t, -net.m_minus[p][t]);
        }
      }
    inc.m.sort_and_combine();

    oracles::TokenState ts;
    ts.q_b.assign(places, 0.0);
    ts.q_e.assign(transitions, 0.0);
    NetMarking s;
    s.q_b = Eigen::VectorXd::Zero(long(places));
    s.q_e = Eigen::VectorXd::Zero(long(transitions));
    for (std::size_t p = 0; p < places; ++p)
      s.q_b(long(p)) = ts.q_b[p] = double(oracles::uniform_int(rng, 0, 9));

    const auto steps = std::size_t(oracles::uniform_int(rng, 1, 10));
    for (std::size_t k = 0; k < steps; ++k) {
      std::vector<double> um(transitions), up(transitions);
      Eigen::VectorXd eum = Eigen::VectorXd::Zero(long(transitions));
      Eigen::VectorXd eup = Eigen::VectorXd::Zero(long(transitions));
      for (std::size_t t = 0; t < transitions; ++t) {
        eum(long(t)) = um[t] = double(oracles::uniform_int(rng, 0, 3));
        eup(long(t)) = up[t] = double(oracles::uniform_int(rng, 0, 3));
      }
      ts = oracles::token_push_step(net, ts, um, up, 1.0);
      s = esn_step(s, eum, eup, inc, 1.0);
      for (std::size_t p = 0; p < places; ++p)
        require(s.q_b(long(p)) == ts.q_b[p],
                "buffer marking diverges from the oracle in trial " +
                    fmt(double(trial)));
      for (std::size_t t = 0; t < transitions; ++t)
        require(s.q_e(long(t)) == ts.q_e[t],
                "transition marking diverges from the oracle in trial " +
                    fmt(double(trial)));
    }
  }
}

// ---------------------------------------------------------------------------
// 5. Duration and synchronization checks as properties.

void criterion_duration_sync() {
  std::mt19937_64 rng(103);
  const std::size_t horizon = 8, nt = 3;
  for (int trial = 0; trial < 40; ++trial) {
    std::vector<int> durations{int(oracles::uniform_int(rng, 0, 3)),
                               int(oracles::uniform_int(rng, 0, 3)),
                               int(oracles::uniform_int(rng, 0, 3))};
    FiringSchedule sched;
    sched.u_minus.assign(horizon, Eigen::VectorXd::Zero(nt));
    sched.u_plus.assign(horizon, Eigen::VectorXd::Zero(nt));
    for (std::size_t k = 0; k < horizon; ++k)
      for (std::size_t t = 0; t < nt; ++t) {
        const double v = oracles::uniform(rng, 0.0, 4.0);
        sched.u_minus[k](long(t)) = v;
        const std::size_t kd = std::size_t(durations[t]);
        if (k + kd < horizon)
          sched.u_plus[k + kd](long(t)) = v;
      }
    require(check_duration(sched, durations).empty(),
            "a correctly shifted schedule was rejected");

    const auto k = std::size_t(oracles::uniform_int(rng, 0, horizon - 1));
    const auto t = std::size_t(oracles::uniform_int(rng, 0, long(nt) - 1));
    const std::size_t kd = std::size_t(durations[t]);
    if (k + kd < horizon) {
      sched.u_plus[k + kd](long(t)) += 0.25;
      require(!check_duration(sched, durations).empty(),
              "a perturbed schedule entry went undetected");
    }
  }

  // Synchronization: schedules built through the selector pass, and a single
  // off-selector entry produces exactly one violation.
  const std::size_t nl = 3, ns = 4, span = 6;
  SyncMatrices sync;
  sync.lambda_plus.rows = sync.lambda_minus.rows = nl;
  sync.lambda_plus.cols = sync.lambda_minus.cols = ns;
  for (std::size_t r = 0; r < nl; ++r) {
    sync.lambda_plus.add(r, std::size_t(oracles::uniform_int(rng, 0, ns - 1)),
                         1.0);
    sync.lambda_minus.add(r, std::size_t(oracles::uniform_int(rng, 0, ns - 1)),
                          1.0);
  }
  FiringSchedule sys, op;
  sys.u_minus.assign(span, Eigen::VectorXd::Zero(ns));
  sys.u_plus.assign(span, Eigen::VectorXd::Zero(ns));
  op.u_minus.assign(span, Eigen::VectorXd::Zero(nl));
  op.u_plus.assign(span, Eigen::VectorXd::Zero(nl));
  for (std::size_t k = 0; k < span; ++k) {
    for (std::size_t t = 0; t < ns; ++t) {
      sys.u_minus[k](long(t)) = oracles::uniform(rng, 0.0, 5.0);
      sys.u_plus[k](long(t)) = oracles::uniform(rng, 0.0, 5.0);
    }
    for (const auto &tr : sync.lambda_plus.triplets)
      op.u_plus[k](long(tr.row)) = tr.value * sys.u_plus[k](long(tr.col));
    for (const auto &tr : sync.lambda_minus.triplets)
      op.u_minus[k](long(tr.row)) = tr.value * sys.u_minus[k](long(tr.col));
  }
  require(check_sync(sys, op, sync).empty(),
          "a selector-consistent schedule was rejected");
  op.u_minus[3](0) += 1e-6;
  require(check_sync(sys, op, sync).size() == 1,
          "an off-selector entry did not yield exactly one violation");
}

// ---------------------------------------------------------------------------
// 6. Quadratic solver against a lattice search and closed forms.

void criterion_qp() {
  CooMatrix empty_a;
  {
    // Pinned variable: min x^2 s.t. x = 1.
    Eigen::VectorXd q(1), f(1), b(1);
    q << 2.0;
    f << 0.0;
    b << 1.0;
    CooMatrix a;
    a.rows = 1;
    a.cols = 1;
    a.add(0, 0, 1.0);
    Solution s = solve_equality_qp(q, f, a, b);
    require(s.status == SolveStatus::Optimal &&
                std::abs(s.x(0) - 1.0) < 1e-10 &&
                std::abs(s.objective - 1.0) < 1e-10,
            "pinned-variable closed form missed");
  }
  {
    // Symmetric split: min x1^2 + x2^2 s.t. x1 + x2 = 2.
    Eigen::VectorXd q(2), f(2), b(1);
    q << 2.0, 2.0;
    f << 0.0, 0.0;
    b << 2.0;
    CooMatrix a;
    a.rows = 1;
    a.cols = 2;
    a.add(0, 0, 1.0);
    a.add(0, 1, 1.0);
    Solution s = solve_equality_qp(q, f, a, b);
    require(s.status == SolveStatus::Optimal &&
                std::abs(s.x(0) - 1.0) < 1e-10 &&
                std::abs(s.x(1) - 1.0) < 1e-10,
            "symmetric-split closed form missed");
  }
  {
    // Orthogonal projection of the origin onto x1 + 2 x2 = 5.
    Eigen::VectorXd q(2), f(2), b(1);
    q << 2.0, 2.0;
    f << 0.0, 0.0;
    b << 5.0;
    CooMatrix a;
    a.rows = 1;
    a.cols = 2;
    a.add(0, 0, 1.0);
    a.add(0, 1, 2.0);
    Solution s = solve_equality_qp(q, f, a, b);
    require(s.status == SolveStatus::Optimal &&
                std::abs(s.x(0) - 1.0) < 1e-10 &&
                std::abs(s.x(1) - 2.0) < 1e-10,
            "projection closed form missed");
  }

  std::mt19937_64 rng(107);
  for (int trial = 0; trial < 100; ++trial) {
    const auto free_dim = std::size_t(oracles::uniform_int(rng, 1, 4));
    const auto m = std::size_t(oracles::uniform_int(rng, 0, 4));
    const std::size_t n = m + free_dim; // at most 8 variables

    // Constraints in solved form x_i = b_i - sum_j r_ij z_j, so the lattice
    // oracle only has to search the free coordinates.
    std::vector<double> rcoef(m * free_dim);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(long(m));
    CooMatrix a;
    a.rows = m;
    a.cols = n;
    for (std::size_t i = 0; i < m; ++i) {
      a.add(i, i, 1.0);
      for (std::size_t j = 0; j < free_dim; ++j) {
        rcoef[i * free_dim + j] = oracles::uniform(rng, -0.5, 0.5);
        a.add(i, m + j, rcoef[i * free_dim + j]);
      }
      b(long(i)) = oracles::uniform(rng, -1.0, 1.0);
    }
    Eigen::VectorXd q = Eigen::VectorXd::Zero(long(n));
    Eigen::VectorXd f = Eigen::VectorXd::Zero(long(n));
    for (std::size_t i = 0; i < n; ++i) {
      q(long(i)) = oracles::uniform(rng, 0.5, 2.0);
      f(long(i)) = oracles::uniform(rng, -0.3, 0.3);
    }

    auto objective = [&](const std::vector<double> &z) {
      std::vector<double> x(n);
      for (std::size_t j = 0; j < free_dim; ++j)
        x[m + j] = z[j];
      for (std::size_t i = 0; i < m; ++i) {
        double v = b(long(i));
        for (std::size_t j = 0; j < free_dim; ++j)
          v -= rcoef[i * free_dim + j] * z[j];
        x[i] = v;
      }
      double obj = 0.0;
      for (std::size_t i = 0; i < n; ++i)
        obj += 0.5 * q(long(i)) * x[i] * x[i] + f(long(i)) * x[i];
      return obj;
    };
    const double lattice =
        oracles::lattice_min(free_dim, objective, 16.0, 9, 12);

    Solution s = solve_equality_qp(q, f, a, b);
    require(s.status == SolveStatus::Optimal,
            "random problem " + fmt(double(trial)) + " did not solve");
    require(std::abs(s.objective - lattice) < 1e-3,
            "objective gap " + fmt(std::abs(s.objective - lattice)) +
                " on trial " + fmt(double(trial)));

    // Stationarity and feasibility of the first-order conditions, computed
    // here from scratch.
    Eigen::MatrixXd ad = a.dense();
    Eigen::VectorXd lam = m > 0 ? s.multipliers.at("equalities")
                                : Eigen::VectorXd::Zero(0);
    Eigen::VectorXd grad = q.asDiagonal() * s.x + f;
    if (m > 0)
      grad += ad.transpose() * lam;
    require(grad.lpNorm<Eigen::Infinity>() <= 1e-8,
            "stationarity residual " +
                fmt(grad.lpNorm<Eigen::Infinity>()) + " on trial " +
                fmt(double(trial)));
    if (m > 0)
      require((ad * s.x - b).lpNorm<Eigen::Infinity>() <= 1e-8,
              "feasibility residual on trial " + fmt(double(trial)));
  }
  (void)empty_a;
}

// ---------------------------------------------------------------------------
// 7. Collapse report for the Mono Lake assembly.

void criterion_collapse() {
  MonoLakeBundle bundle =
      build_monolake(scenario_params(), {{1.2}, {18.0}, {150.0}}, 10);
  HfnmcfProblem p = assemble(bundle.system, bundle.assembly);
  const CollapseReport &r = p.report();
  require(r.blocks.size() == 16, "expected 16 report blocks, saw " +
                                     fmt(double(r.blocks.size())));

  const std::vector<std::string> active = {"esn_continuity", "esn_boundary",
                                           "initial_conditions",
                                           "device_equality"};
  const std::vector<std::string> relaxed = {"capacity_bounds"};
  for (const auto &blk : r.blocks) {
    BlockStatus expected = BlockStatus::Collapsed;
    for (const auto &name : active)
      if (blk.block == name)
        expected = BlockStatus::Active;
    for (const auto &name : relaxed)
      if (blk.block == name)
        expected = BlockStatus::Relaxed;
    require(blk.status == expected, "block " + blk.block +
                                        " has an unexpected status");
    if (blk.status != BlockStatus::Active)
      require(!blk.reason.empty(), "block " + blk.block + " lacks a reason");
  }
}

// ---------------------------------------------------------------------------
// 8. Document round-trips and strict series ingestion.

std::string random_stockflow_doc(std::mt19937_64 &rng) {
  nlohmann::json j;
  j["kind"] = "stockflow";
  j["version"] = 1;
  j["dt"] = oracles::uniform(rng, 0.1, 2.0);
  j["horizon"] = int(oracles::uniform_int(rng, 0, 20));

  const auto ns = std::size_t(oracles::uniform_int(rng, 1, 4));
  j["stocks"] = nlohmann::json::array();
  std::vector<std::string> names;
  for (std::size_t i = 0; i < ns; ++i) {
    names.push_back("s" + std::to_string(i));
    j["stocks"].push_back({{"name", names.back()},
                           {"initial", oracles::uniform(rng, -5.0, 50.0)}});
  }
  j["constants"] = nlohmann::json::object();
  j["constants"]["c0"] = oracles::uniform(rng, -2.0, 2.0);

  j["flows"] = nlohmann::json::array();
  const auto nf = std::size_t(oracles::uniform_int(rng, 1, 4));
  for (std::size_t i = 0; i < nf; ++i) {
    auto endpoint = [&]() -> std::string {
      const long pick = oracles::uniform_int(rng, 0, long(ns));
      return pick == long(ns) ? "boundary" : names[std::size_t(pick)];
    };
    const char *rates[] = {"c0", "0.5 * c0 + 1", "c0 * (2 - c0)", "-c0 / 4"};
    j["flows"].push_back({{"name", "f" + std::to_string(i)},
                          {"source", endpoint()},
                          {"sink", endpoint()},
                          {"rate", rates[oracles::uniform_int(rng, 0, 3)]}});
  }
  return j.dump();
}

void criterion_round_trip() {
  for (const char *name : {"monolake.model", "markov.model", "toy_qp.model",
                           "monolake_sd.model"}) {
    ParseResult r = parse_document(read_fixture(name));
    require(r.ok(), std::string("fixture ") + name + " failed to parse");
    ParseResult again = parse_document(serialize(*r.document));
    require(again.ok() && *again.document == *r.document,
            std::string("fixture ") + name + " does not round-trip");
  }

  std::mt19937_64 rng(109);
  for (int trial = 0; trial < 100; ++trial) {
    ParseResult r = parse_document(random_stockflow_doc(rng));
    require(r.ok(), "generated document failed to parse");
    ParseResult again = parse_document(serialize(*r.document));
    require(again.ok() && *again.document == *r.document,
            "generated document does not round-trip");
  }

  auto rejects = [](const char *csv) {
    try {
      load_series(csv, {"a"});
    } catch (const Error &) {
      return true;
    }
    return false;
  };
  require(rejects("k,a\n1,1\n2,2\n"), "a leading gap was accepted");
  require(rejects("k,a\n0,1\n1,2\n3,4\n"), "an interior gap was accepted");
  require(rejects("k,a\n1,1\n0,2\n"), "a misordered index was accepted");
  require(rejects("k,a\n0,1\n0,2\n"), "a duplicate index was accepted");
}

// ---------------------------------------------------------------------------
// 9. Device-relation anchor points.

void criterion_device_points() {
  require(std::abs(elevation(0.0) - 6288.5) < 1e-12, "elevation(0)");
  require(std::abs(surface_area(0.0) - 15.44) < 1e-12, "surface_area(0)");
  require(std::abs(eta_rho(1.0) - 1.0) < 1e-12, "eta_rho(1)");
  require(std::abs(specific_gravity(2500.0) - (1.0 + 250.0 / 3400.0)) < 1e-12,
          "specific_gravity(2500)");
  Eigen::VectorXd f = monolake_flows(2228.0, 1.2, 18.0, 150.0,
                                     scenario_params());
  require(std::abs(f(1) - 134.0) < 1e-12, "export-adjusted diversion flow");
}

struct Criterion {
  const char *label;
  void (*body)();
  double budget_s; // 0 means no runtime requirement
};

} // namespace

int main() {
  const Criterion criteria[] = {
      {"incidence fidelity", criterion_incidence, 1.0},
      {"cross-engine equivalence", criterion_cross_engine, 5.0},
      {"drawdown monotonicity and mass balance", criterion_drawdown, 0.0},
      {"net semantics vs token oracle", criterion_net_semantics, 0.0},
      {"duration and synchronization checks", criterion_duration_sync, 0.0},
      {"quadratic solver vs lattice oracle", criterion_qp, 10.0},
      {"collapse report", criterion_collapse, 0.0},
      {"document round-trips and series ingestion", criterion_round_trip, 0.0},
      {"device-relation anchor points", criterion_device_points, 0.0},
  };

  int failures = 0;
  int index = 0;
  for (const auto &c : criteria) {
    ++index;
    const auto start = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = true;
    try {
      c.body();
    } catch (const std::exception &e) {
      ok = false;
      detail = e.what();
    }
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    if (ok && c.budget_s > 0.0 && elapsed > c.budget_s) {
      ok = false;
      detail = "runtime " + fmt(elapsed) + " s exceeds " + fmt(c.budget_s) +
               " s budget";
    }
    std::printf("%s  criterion %d: %s (%.2f s)%s%s\n", ok ? "PASS" : "FAIL",
                index, c.label, elapsed, ok ? "" : " -- ",
                ok ? "" : detail.c_str());
    if (!ok)
      ++failures;
  }
  return failures == 0 ? 0 : 1;
}
