#ifndef HFGTFLOW_QP_SOLVER_HPP
#define HFGTFLOW_QP_SOLVER_HPP

#include <Eigen/Dense>
#include <map>
#include <string>
#include <vector>

#include "hfgtflow/hfnmcf.hpp"
#include "hfgtflow/trajectory.hpp"

namespace hfgtflow {

enum class SolveMode { Auto, KktDirect, ForwardPropagate };

struct SolveOptions {
  SolveMode mode = SolveMode::Auto;
  std::size_t max_iterations = 200; // active-set iterations
  double tolerance = 1e-8;
  double regularization = 0.0; // added to singular reduced Hessians when > 0
};

enum class SolveStatus { Optimal, Infeasible, Unbounded, MaxIterations };

const char *to_string(SolveStatus status);

struct Solution {
  Eigen::VectorXd x;
  Eigen::VectorXd y;
  std::map<std::string, Eigen::VectorXd> multipliers;
  SolveStatus status = SolveStatus::Optimal;
  double objective = 0.0;
  double max_residual = 0.0;        // worst primal equality residual
  double stationarity_residual = 0.0;
  std::vector<std::string> warnings;
};

/// Minimizes 0.5 x' diag(f_quad) x + f_lin' x subject to a x = b.
/// f_quad entries must be >= 0. A rank-deficient reduced Hessian raises
/// SingularKkt unless options.regularization > 0; an unbounded descent
/// direction yields status Unbounded; b outside the range of a yields
/// Infeasible.
Solution solve_equality_qp(const Eigen::VectorXd &f_quad,
                           const Eigen::VectorXd &f_lin, const CooMatrix &a,
                           const Eigen::VectorXd &b,
                           const SolveOptions &options = {});

/// Same objective and equalities plus box bounds lower <= x <= upper
/// (+/-infinity entries relax a side). Active-set iteration over the bound
/// constraints; stops with MaxIterations when the working set does not settle.
Solution solve_box_qp(const Eigen::VectorXd &f_quad,
                      const Eigen::VectorXd &f_lin, const CooMatrix &a,
                      const Eigen::VectorXd &b, const Eigen::VectorXd &lower,
                      const Eigen::VectorXd &upper,
                      const SolveOptions &options = {});

/// Initial-value integration of a problem whose flows are all fixed per step
/// by pins or explicit-in-state device models and whose objective is null.
/// Errors: UnderdeterminedStep (a flow nothing determines), NonfiniteState.
Solution forward_propagate(const HfnmcfProblem &problem,
                           const SolveOptions &options = {});

/// Dispatch. Auto picks ForwardPropagate when the objective is null, every
/// device model is explicit-in-state, and every flow is determined; otherwise
/// it assembles the stacked KKT system (rejecting nonlinear device models).
Solution solve(const HfnmcfProblem &problem, const SolveOptions &options = {});

/// Columns: k, place labels, capability ids (input-side firings), aux names.
Trajectory solution_trajectory(const HfnmcfProblem &problem,
                               const Solution &solution);

} // namespace hfgtflow

#endif
