#ifndef HFGTFLOW_SD_ENGINE_HPP
#define HFGTFLOW_SD_ENGINE_HPP

#include <map>
#include <string>
#include <vector>

#include "hfgtflow/expr.hpp"
#include "hfgtflow/trajectory.hpp"

namespace hfgtflow {

/// Independent stock-flow oracle engine. Deliberately shares no numerical
/// code with the net/solver path: explicit Euler over named stocks with
/// expression-evaluated rates.

struct Stock {
  std::string name;
  double initial = 0.0;
  std::string units;
};

inline constexpr const char *kBoundary = "boundary";

struct Flow {
  std::string name;
  std::string source; // stock name or kBoundary
  std::string sink;   // stock name or kBoundary
  Expr::Ptr rate;
};

struct Auxiliary {
  std::string name;
  Expr::Ptr expression;
};

/// Constant values broadcast over all steps; per-step tracks override.
struct StockFlowModel {
  std::vector<Stock> stocks;
  std::vector<Flow> flows;
  std::vector<Auxiliary> auxiliaries; // acyclic per step
  std::map<std::string, double> constants;
  std::map<std::string, std::vector<double>> exogenous;
  double dt = 1.0;
  std::size_t horizon = 0;

  /// Optional piecewise-linear lookups usable as one-argument functions of a
  /// named input; evaluated before auxiliaries each step.
  struct Lookup {
    std::string name;
    std::string input;
    std::vector<double> x; // strictly increasing
    std::vector<double> y;
  };
  std::vector<Lookup> lookups;
};

struct SdState {
  std::vector<double> stocks;
  std::vector<double> flows;
  std::vector<double> auxiliaries;
};

/// Evaluates all lookups/auxiliaries/flow rates at step k, then advances each
/// stock by (inflows - outflows) * dt.
SdState sd_step(const SdState &state, const StockFlowModel &model,
                std::size_t k);

/// Runs horizon steps; trajectory columns are k, stocks, flows, auxiliaries.
/// Flow/auxiliary values in row k are the rates applied between k and k+1
/// (zero on the final row).
Trajectory run_sd(const StockFlowModel &model);

SdState initial_sd_state(const StockFlowModel &model);

} // namespace hfgtflow

#endif
