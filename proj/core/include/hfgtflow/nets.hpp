#ifndef HFGTFLOW_NETS_HPP
#define HFGTFLOW_NETS_HPP

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "hfgtflow/incidence.hpp"

namespace hfgtflow {

/// Elementary Petri net state: place marking Q_B (operand units, buffer-major
/// places) and transition marking Q_E (in-flight quantity per capability).
struct NetMarking {
  Eigen::VectorXd q_b;
  Eigen::VectorXd q_e;
};

/// Per-step firing vectors over a horizon of K steps. Values are real-valued
/// and sign-agnostic; nonnegativity, when wanted, comes from problem bounds.
struct FiringSchedule {
  std::vector<Eigen::VectorXd> u_minus; // K entries
  std::vector<Eigen::VectorXd> u_plus;  // K entries

  std::size_t horizon() const { return u_minus.size(); }
};

/// 0/1 selectors coupling engineering-system firings to the stacked
/// operand-net firings; each row has at most one nonzero.
struct SyncMatrices {
  CooMatrix lambda_plus;
  CooMatrix lambda_minus;
};

struct Violation {
  std::size_t transition;
  std::size_t step;
  double magnitude;
};

inline constexpr double kNetTolerance = 1e-9;

/// One application of the engineering-system state transition:
///   Q_B' = Q_B + M+ U+ dt - M- U- dt
///   Q_E' = Q_E - U+ dt + U- dt
NetMarking esn_step(const NetMarking &marking, const Eigen::VectorXd &u_minus,
                    const Eigen::VectorXd &u_plus,
                    const IncidenceMatrices &incidence, double dt);

/// Identical update with an operand net's own incidence.
NetMarking operand_net_step(const NetMarking &marking,
                            const Eigen::VectorXd &u_minus,
                            const Eigen::VectorXd &u_plus,
                            const IncidenceMatrices &incidence, double dt);

/// Checks U+_psi[k + k_d(psi)] == U-_psi[k] for every transition and step;
/// firings shifted beyond the horizon are excluded.
std::vector<Violation> check_duration(const FiringSchedule &schedule,
                                      const std::vector<int> &durations,
                                      double tolerance = kNetTolerance);

/// Checks U+_L[k] == Lambda+ U+[k] and U-_L[k] == Lambda- U-[k] for all k.
/// Transition index in a violation addresses the stacked operand-net row;
/// minus-side rows are offset by the plus-side row count.
std::vector<Violation> check_sync(const FiringSchedule &system_schedule,
                                  const FiringSchedule &operand_schedule,
                                  const SyncMatrices &sync,
                                  double tolerance = kNetTolerance);

} // namespace hfgtflow

#endif
