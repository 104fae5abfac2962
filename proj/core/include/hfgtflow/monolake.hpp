#ifndef HFGTFLOW_MONOLAKE_HPP
#define HFGTFLOW_MONOLAKE_HPP

#include <Eigen/Dense>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "hfgtflow/hfnmcf.hpp"
#include "hfgtflow/sd_engine.hpp"

namespace hfgtflow {

/// Mono Lake watershed coefficients. Units: volumes KAF, elevation ft,
/// surface area kilo-acres, rates per year.
struct MonoParams {
  double lambda_perc = 0.01;      // 1/yr, lake-to-aquifer percolation
  double lambda_fw = 3.75;        // ft/yr, freshwater evaporation rate
  double rho_water = 1.36;        // specific-gravity numerator slope
  double m_tds = 250.0;           // dissolved-solids mass term
  double v_la = 16.0;             // KAF/yr, Los Angeles aqueduct export
  double v_gwwith = 6800.0;       // KAF/yr, groundwater withdrawal
  double v_gdis = 0.0;            // KAF/yr, groundwater discharge
  double elev_slope = 0.0265;     // ft per KAF
  double elev_intercept = 6288.5; // ft
  double area_slope = 0.008;      // kilo-acres per KAF
  double area_intercept = 15.44;  // kilo-acres
  double eta_t_slope = 0.06;
  double eta_t_intercept = -0.08;
  double eta_rho_slope = -0.9;
  double eta_rho_intercept = 1.9;
  double v_mono0 = 2228.0; // KAF, initial lake volume (fixture default)
  double v_aqui0 = 6800.0; // KAF, initial aquifer volume (fixture default)
};

/// Exogenous drivers, one entry per step (size 1 broadcasts).
struct ExogenousSeries {
  std::vector<double> precip; // ft/yr
  std::vector<double> temp;   // regression units
  std::vector<double> sgr;    // KAF/yr, stream and groundwater recharge
};

double elevation(double v_mono, const MonoParams &params = {});
double surface_area(double v_mono, const MonoParams &params = {});
/// Throws DivisionByZero at v_mono = 0.
double specific_gravity(double v_mono, const MonoParams &params = {});
double eta_T(double temp, const MonoParams &params = {});
double eta_rho(double rho_bar, const MonoParams &params = {});
double evap_rate(double eta_rho_v, double eta_t_v,
                 const MonoParams &params = {});

/// Flow vector [V_P, V_FPDP, V_Evap, V_GWWith, V_Perc, V_GDis] for one step.
Eigen::VectorXd monolake_flows(double v_mono, double precip, double temp,
                               double sgr, const MonoParams &params = {});

/// One finite-state Markov chain per exogenous track.
struct MarkovTrack {
  std::string name;
  std::vector<double> values;               // emitted state values
  std::vector<std::vector<double>> transition; // row-stochastic
  std::size_t initial_state = 0;
};

struct MarkovSpec {
  std::vector<MarkovTrack> tracks;
};

/// Deterministic given the seed; every emitted value is a member of the
/// track's state set. Throws NonStochasticMatrix when a row does not sum to 1
/// within 1e-9.
std::map<std::string, std::vector<double>>
gen_exogenous(const MarkovSpec &spec, std::uint64_t seed, std::size_t steps);

/// The three mutually consistent representations of the same watershed.
struct MonoLakeBundle {
  SystemModel system;
  AssemblySpec assembly;
  StockFlowModel stockflow;
  MonoParams params;
};

MonoLakeBundle build_monolake(const MonoParams &params,
                              const ExogenousSeries &series,
                              std::size_t horizon, double dt = 1.0);

} // namespace hfgtflow

#endif
