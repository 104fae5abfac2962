#include "hfgtflow/compare.hpp"

#include <cmath>
#include <limits>

#include "json.hpp"

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

CompareReport compare_trajectories(const Trajectory &oracle,
                                   const Trajectory &candidate,
                                   const std::vector<std::string> &variables,
                                   double threshold_pct,
                                   double divergence_tol) {
  CompareReport report;
  report.threshold_pct = threshold_pct;

  const std::size_t n = std::min(oracle.steps(), candidate.steps());
  for (const auto &name : variables) {
    std::vector<double> a = oracle.column(name);
    std::vector<double> b = candidate.column(name);

    VariableComparison vc;
    vc.name = name;
    double sq_sum = 0.0, abs_sum = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double d = a[i] - b[i];
      sq_sum += d * d;
      abs_sum += std::abs(a[i]);
      if (std::abs(d) > vc.max_abs_dev)
        vc.max_abs_dev = std::abs(d);
      if (vc.first_divergence < 0 && std::abs(d) > divergence_tol)
        vc.first_divergence = long(i);
    }
    if (n > 0) {
      const double rmse = std::sqrt(sq_sum / double(n));
      const double denom = abs_sum / double(n);
      vc.nrmse_pct = denom > 0.0
                         ? 100.0 * rmse / denom
                         : (rmse == 0.0
                                ? 0.0
                                : std::numeric_limits<double>::infinity());
    }
    if (!(vc.nrmse_pct <= threshold_pct))
      report.pass = false;
    report.variables.push_back(std::move(vc));
  }
  return report;
}

std::string report_to_json(const CompareReport &report) {
  nlohmann::json j;
  j["threshold_pct"] = report.threshold_pct;
  j["pass"] = report.pass;
  j["oracle_runtime_s"] = report.oracle_runtime_s;
  j["candidate_runtime_s"] = report.candidate_runtime_s;
  j["config"] = report.config_echo;
  j["variables"] = nlohmann::json::array();
  for (const auto &vc : report.variables) {
    nlohmann::json v;
    v["name"] = vc.name;
    v["nrmse_pct"] = std::isfinite(vc.nrmse_pct) ? nlohmann::json(vc.nrmse_pct)
                                                 : nlohmann::json("inf");
    v["max_abs_dev"] = vc.max_abs_dev;
    v["first_divergence"] = vc.first_divergence;
    j["variables"].push_back(v);
  }
  return j.dump(1) + "\n";
}

} // namespace hfgtflow
