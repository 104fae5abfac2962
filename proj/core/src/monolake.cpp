#include "hfgtflow/monolake.hpp"

#include <cmath>
#include <random>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

double elevation(double v_mono, const MonoParams &params) {
  return params.elev_slope * v_mono + params.elev_intercept;
}

double surface_area(double v_mono, const MonoParams &params) {
  return params.area_slope * v_mono + params.area_intercept;
}

double specific_gravity(double v_mono, const MonoParams &params) {
  const double denom = params.rho_water * v_mono;
  if (denom == 0.0)
    throw Error(errc::division_by_zero,
                "specific gravity undefined at zero lake volume");
  return (params.rho_water * v_mono + params.m_tds) / denom;
}

double eta_T(double temp, const MonoParams &params) {
  return params.eta_t_slope * temp + params.eta_t_intercept;
}

double eta_rho(double rho_bar, const MonoParams &params) {
  return params.eta_rho_slope * rho_bar + params.eta_rho_intercept;
}

double evap_rate(double eta_rho_v, double eta_t_v, const MonoParams &params) {
  return params.lambda_fw * eta_rho_v * eta_t_v;
}

Eigen::VectorXd monolake_flows(double v_mono, double precip, double temp,
                               double sgr, const MonoParams &params) {
  const double area = surface_area(v_mono, params);
  const double lam =
      evap_rate(eta_rho(specific_gravity(v_mono, params), params),
                eta_T(temp, params), params);
  Eigen::VectorXd f(6);
  f << precip * area, sgr - params.v_la, lam * area, params.v_gwwith,
      params.lambda_perc * v_mono, params.v_gdis;
  return f;
}

std::map<std::string, std::vector<double>>
gen_exogenous(const MarkovSpec &spec, std::uint64_t seed, std::size_t steps) {
  std::mt19937_64 rng(seed);
  // Explicit 53-bit uniform so the stream is identical on every platform.
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53; };

  std::map<std::string, std::vector<double>> out;
  for (const auto &track : spec.tracks) {
    const std::size_t n = track.values.size();
    if (n == 0)
      throw Error(errc::invalid_document,
                  "track '" + track.name + "' has no states");
    if (track.transition.size() != n)
      throw Error(errc::dim_mismatch,
                  "track '" + track.name + "' transition matrix is not square");
    for (const auto &row : track.transition) {
      if (row.size() != n)
        throw Error(errc::dim_mismatch,
                    "track '" + track.name + "' transition matrix is not square");
      double sum = 0.0;
      for (double p : row) {
        if (p < 0.0)
          throw Error(errc::non_stochastic_matrix,
                      "track '" + track.name + "' has a negative probability");
        sum += p;
      }
      if (std::abs(sum - 1.0) > 1e-9)
        throw Error(errc::non_stochastic_matrix,
                    "track '" + track.name + "' row does not sum to 1");
    }
    if (track.initial_state >= n)
      throw Error(errc::dim_mismatch,
                  "track '" + track.name + "' initial state out of range");

    std::vector<double> series;
    series.reserve(steps);
    std::size_t state = track.initial_state;
    for (std::size_t k = 0; k < steps; ++k) {
      series.push_back(track.values[state]);
      const double u = uniform();
      double acc = 0.0;
      std::size_t next = n - 1;
      for (std::size_t j = 0; j < n; ++j) {
        acc += track.transition[state][j];
        if (u < acc) {
          next = j;
          break;
        }
      }
      state = next;
    }
    out[track.name] = std::move(series);
  }
  return out;
}

namespace {

// Aux slots, shared between the assembly spec and the device closures.
enum Aux : std::size_t {
  kAuxH = 0,
  kAuxArea = 1,
  kAuxRho = 2,
  kAuxEtaT = 3,
  kAuxEtaRho = 4,
  kAuxLambdaEvap = 5,
  kAuxPrecip = 6,
  kAuxTemp = 7,
  kAuxSgr = 8,
  kAuxVla = 9,
};

// Flow columns, matching the capability declaration order.
enum FlowCol : std::size_t {
  kFlowP = 0,
  kFlowFpdp = 1,
  kFlowEvap = 2,
  kFlowWith = 3,
  kFlowPerc = 4,
  kFlowDis = 5,
};

SystemModel build_system_model() {
  std::vector<Operand> operands{{"water", "water", false}};
  std::vector<Resource> resources{
      {"mono_lake", "Mono Lake", ResourceKind::Transformation},
      {"aquifer", "groundwater aquifer", ResourceKind::Transformation},
      {"groundwater_path", "lake-aquifer exchange path",
       ResourceKind::Transportation},
  };
  auto water = [] { return std::vector<OperandQuantity>{{"water", 1.0}}; };
  std::vector<Process> processes{
      {"precipitate", "precipitate onto lake", ProcessKind::Transformation,
       water(), water()},
      {"recharge_fpdp", "fresh-water point discharge", ProcessKind::Transformation,
       water(), water()},
      {"evaporate", "evaporate from lake", ProcessKind::Transformation,
       water(), water()},
      {"withdraw", "withdraw groundwater", ProcessKind::Transformation,
       water(), water()},
      {"percolate", "percolate lake to aquifer",
       ProcessKind::RefinedTransportation, water(), water()},
      {"discharge", "discharge aquifer to lake",
       ProcessKind::RefinedTransportation, water(), water()},
  };
  std::vector<Capability> capabilities{
      {"V_P", "mono_lake", "precipitate", kEnvironment, "mono_lake", 0},
      {"V_FPDP", "mono_lake", "recharge_fpdp", kEnvironment, "mono_lake", 0},
      {"V_Evap", "mono_lake", "evaporate", "mono_lake", kEnvironment, 0},
      {"V_GWWith", "aquifer", "withdraw", "aquifer", kEnvironment, 0},
      {"V_Perc", "groundwater_path", "percolate", "mono_lake", "aquifer", 0},
      {"V_GDis", "groundwater_path", "discharge", "aquifer", "mono_lake", 0},
  };
  return build_system(std::move(operands), std::move(resources),
                      std::move(processes), std::move(capabilities));
}

DeviceModel aux_device(std::string name, std::size_t aux_slot,
                       std::function<double(const StepMut &)> compute_mut,
                       std::function<double(const StepRef &)> compute_ref) {
  DeviceModel d;
  d.name = std::move(name);
  d.kind = DeviceKind::Equality;
  d.residual_dim = 1;
  d.determines_aux = {aux_slot};
  d.residual = [aux_slot, compute_ref](const StepRef &s) {
    Eigen::VectorXd r(1);
    r(0) = s.aux(aux_slot) - compute_ref(s);
    return r;
  };
  d.explicit_eval = [aux_slot, compute_mut](StepMut &s) {
    s.set_aux(aux_slot, compute_mut(s));
  };
  return d;
}

DeviceModel flow_device(std::string name, std::size_t flow,
                        std::function<double(const StepMut &)> compute_mut,
                        std::function<double(const StepRef &)> compute_ref) {
  DeviceModel d;
  d.name = std::move(name);
  d.kind = DeviceKind::Equality;
  d.residual_dim = 1;
  d.determines_flows = {flow};
  d.residual = [flow, compute_ref](const StepRef &s) {
    Eigen::VectorXd r(1);
    r(0) = s.u(flow) - compute_ref(s);
    return r;
  };
  d.explicit_eval = [flow, compute_mut](StepMut &s) {
    s.set_flow(flow, compute_mut(s));
  };
  return d;
}

StockFlowModel build_stockflow(const MonoParams &p,
                               const ExogenousSeries &series,
                               std::size_t horizon, double dt) {
  StockFlowModel m;
  m.dt = dt;
  m.horizon = horizon;
  m.stocks = {{"V_Mono", p.v_mono0, "KAF"}, {"V_Aqui", p.v_aqui0, "KAF"}};

  auto lit = [](double v) { return Expr::literal(v); };
  auto ref = [](const char *n) { return Expr::ref(n); };
  auto line = [&](double slope, Expr::Ptr x, double intercept) {
    return Expr::add(Expr::mul(lit(slope), std::move(x)), lit(intercept));
  };

  m.auxiliaries = {
      {"H", line(p.elev_slope, ref("V_Mono"), p.elev_intercept)},
      {"A_S", line(p.area_slope, ref("V_Mono"), p.area_intercept)},
      {"rho_bar",
       Expr::div(line(p.rho_water, ref("V_Mono"), p.m_tds),
                 Expr::mul(lit(p.rho_water), ref("V_Mono")))},
      {"eta_T", line(p.eta_t_slope, ref("temp"), p.eta_t_intercept)},
      {"eta_rho", line(p.eta_rho_slope, ref("rho_bar"), p.eta_rho_intercept)},
      {"lambda_Evap",
       Expr::mul(lit(p.lambda_fw), Expr::mul(ref("eta_rho"), ref("eta_T")))},
  };

  m.flows = {
      {"V_P", kBoundary, "V_Mono", Expr::mul(ref("precip"), ref("A_S"))},
      {"V_FPDP", kBoundary, "V_Mono", Expr::sub(ref("sgr"), ref("V_LA"))},
      {"V_Evap", "V_Mono", kBoundary, Expr::mul(ref("lambda_Evap"), ref("A_S"))},
      {"V_GWWith", "V_Aqui", kBoundary, ref("withdrawal")},
      {"V_Perc", "V_Mono", "V_Aqui",
       Expr::mul(lit(p.lambda_perc), ref("V_Mono"))},
      {"V_GDis", "V_Aqui", "V_Mono", ref("discharge")},
  };

  m.constants = {{"V_LA", p.v_la},
                 {"withdrawal", p.v_gwwith},
                 {"discharge", p.v_gdis}};

  auto add_track = [&m](const char *name, const std::vector<double> &v) {
    if (v.size() == 1)
      m.constants[name] = v[0];
    else
      m.exogenous[name] = v;
  };
  add_track("precip", series.precip);
  add_track("temp", series.temp);
  add_track("sgr", series.sgr);
  return m;
}

AssemblySpec build_assembly(const MonoParams &p, const ExogenousSeries &series,
                            std::size_t horizon, double dt) {
  AssemblySpec spec;
  spec.horizon = horizon;
  spec.dt = dt;
  spec.place_labels = {"V_Mono", "V_Aqui"};
  spec.initial = {{StateSection::QB, 0, p.v_mono0},
                  {StateSection::QB, 1, p.v_aqui0}};
  spec.pins = {{"V_GWWith", PinSide::Both, {p.v_gwwith}},
               {"V_GDis", PinSide::Both, {p.v_gdis}}};
  spec.exogenous = {{"precip", series.precip},
                    {"temp", series.temp},
                    {"sgr", series.sgr}};

  spec.aux_names = {"H",       "A_S",         "rho_bar", "eta_T", "eta_rho",
                    "lambda_Evap", "P_dot", "T",       "V_SGR", "V_LA"};
  spec.aux_mirrors = {{kAuxPrecip, "precip"}, {kAuxTemp, "temp"},
                      {kAuxSgr, "sgr"}};
  spec.aux_constants = {{kAuxVla, p.v_la}};

  spec.devices.push_back(aux_device(
      "elevation", kAuxH,
      [p](const StepMut &s) { return elevation(s.q_b(0), p); },
      [p](const StepRef &s) { return elevation(s.q_b(0), p); }));
  spec.devices.push_back(aux_device(
      "surface_area", kAuxArea,
      [p](const StepMut &s) { return surface_area(s.q_b(0), p); },
      [p](const StepRef &s) { return surface_area(s.q_b(0), p); }));
  spec.devices.push_back(aux_device(
      "specific_gravity", kAuxRho,
      [p](const StepMut &s) { return specific_gravity(s.q_b(0), p); },
      [p](const StepRef &s) { return specific_gravity(s.q_b(0), p); }));
  spec.devices.push_back(aux_device(
      "eta_T", kAuxEtaT,
      [p](const StepMut &s) { return eta_T(s.aux(kAuxTemp), p); },
      [p](const StepRef &s) { return eta_T(s.aux(kAuxTemp), p); }));
  spec.devices.push_back(aux_device(
      "eta_rho", kAuxEtaRho,
      [p](const StepMut &s) { return eta_rho(s.aux(kAuxRho), p); },
      [p](const StepRef &s) { return eta_rho(s.aux(kAuxRho), p); }));
  {
    DeviceModel d = aux_device(
        "evap_rate", kAuxLambdaEvap,
        [p](const StepMut &s) {
          return evap_rate(s.aux(kAuxEtaRho), s.aux(kAuxEtaT), p);
        },
        [p](const StepRef &s) {
          return evap_rate(s.aux(kAuxEtaRho), s.aux(kAuxEtaT), p);
        });
    auto base = d.explicit_eval;
    d.explicit_eval = [base](StepMut &s) {
      base(s);
      if (s.aux(kAuxLambdaEvap) < 0.0)
        s.warn("negative evaporation rate at step " + std::to_string(s.k()) +
               "; propagated without clamping");
    };
    spec.devices.push_back(std::move(d));
  }

  spec.devices.push_back(flow_device(
      "precip_flow", kFlowP,
      [](const StepMut &s) { return s.aux(kAuxPrecip) * s.aux(kAuxArea); },
      [](const StepRef &s) { return s.aux(kAuxPrecip) * s.aux(kAuxArea); }));
  spec.devices.push_back(flow_device(
      "fpdp_flow", kFlowFpdp,
      [](const StepMut &s) { return s.aux(kAuxSgr) - s.aux(kAuxVla); },
      [](const StepRef &s) { return s.aux(kAuxSgr) - s.aux(kAuxVla); }));
  spec.devices.push_back(flow_device(
      "evap_flow", kFlowEvap,
      [](const StepMut &s) { return s.aux(kAuxLambdaEvap) * s.aux(kAuxArea); },
      [](const StepRef &s) { return s.aux(kAuxLambdaEvap) * s.aux(kAuxArea); }));
  spec.devices.push_back(flow_device(
      "perc_flow", kFlowPerc,
      [p](const StepMut &s) { return p.lambda_perc * s.q_b(0); },
      [p](const StepRef &s) { return p.lambda_perc * s.q_b(0); }));
  return spec;
}

} // namespace

MonoLakeBundle build_monolake(const MonoParams &params,
                              const ExogenousSeries &series,
                              std::size_t horizon, double dt) {
  if (params.v_mono0 <= 0.0 || params.v_aqui0 <= 0.0)
    throw Error(errc::kind_violation, "initial volumes must be positive");
  if (series.precip.empty() || series.temp.empty() || series.sgr.empty())
    throw Error(errc::inconsistent_horizon, "exogenous series are empty");

  MonoLakeBundle bundle{build_system_model(),
                        build_assembly(params, series, horizon, dt),
                        build_stockflow(params, series, horizon, dt), params};
  return bundle;
}

} // namespace hfgtflow
