#ifndef HFGTFLOW_COMPARE_HPP
#define HFGTFLOW_COMPARE_HPP

#include <string>
#include <vector>

#include "hfgtflow/trajectory.hpp"

namespace hfgtflow {

struct VariableComparison {
  std::string name;
  double nrmse_pct = 0.0;   // 100 * RMSE(a-b) / mean(|oracle|)
  double max_abs_dev = 0.0;
  long first_divergence = -1; // first row exceeding divergence_tol, -1 if none
};

struct CompareReport {
  std::vector<VariableComparison> variables;
  double threshold_pct = 0.15;
  bool pass = true;
  double oracle_runtime_s = 0.0;
  double candidate_runtime_s = 0.0;
  std::string config_echo;
};

/// Oracle-normalized comparison over shared rows of the named columns. Both
/// trajectories must contain every requested column and at least as many rows
/// as the oracle reports.
CompareReport compare_trajectories(const Trajectory &oracle,
                                   const Trajectory &candidate,
                                   const std::vector<std::string> &variables,
                                   double threshold_pct = 0.15,
                                   double divergence_tol = 1e-9);

std::string report_to_json(const CompareReport &report);

} // namespace hfgtflow

#endif
