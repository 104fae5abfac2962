#include "hfgtflow/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

const char *to_string(SolveStatus status) {
  switch (status) {
  case SolveStatus::Optimal:
    return "optimal";
  case SolveStatus::Infeasible:
    return "infeasible";
  case SolveStatus::Unbounded:
    return "unbounded";
  case SolveStatus::MaxIterations:
    return "max-iterations";
  }
  return "unknown";
}

namespace {

Eigen::VectorXd dense_or_zero(const Eigen::VectorXd &v, long n) {
  if (v.size() == 0)
    return Eigen::VectorXd::Zero(n);
  if (v.size() != n)
    throw Error(errc::dim_mismatch, "cost vector length mismatch");
  return v;
}

double inf_norm(const Eigen::VectorXd &v) {
  return v.size() ? v.cwiseAbs().maxCoeff() : 0.0;
}

} // namespace

Solution solve_equality_qp(const Eigen::VectorXd &f_quad,
                           const Eigen::VectorXd &f_lin, const CooMatrix &a,
                           const Eigen::VectorXd &b,
                           const SolveOptions &options) {
  if (options.tolerance <= 0.0)
    throw Error(errc::kind_violation, "tolerance must be positive");
  const long n = f_quad.size();
  if ((f_quad.array() < 0.0).any())
    throw Error(errc::kind_violation, "quadratic cost must be nonnegative");
  const Eigen::VectorXd f = dense_or_zero(f_lin, n);
  if (a.cols != std::size_t(n) && !(a.rows == 0 && a.cols == 0))
    throw Error(errc::dim_mismatch, "constraint column count mismatch");
  if (b.size() != long(a.rows))
    throw Error(errc::dim_mismatch, "constraint right-hand-side mismatch");

  Solution sol;
  const double tol = options.tolerance;

  Eigen::MatrixXd A(long(a.rows), n);
  A.setZero();
  for (const auto &t : a.triplets)
    A(long(t.row), long(t.col)) += t.value;

  Eigen::VectorXd x_p = Eigen::VectorXd::Zero(n);
  Eigen::MatrixXd N;
  if (a.rows == 0) {
    N = Eigen::MatrixXd::Identity(n, n);
  } else {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(A);
    x_p = cod.solve(b);
    if (inf_norm(A * x_p - b) > tol * (1.0 + inf_norm(b))) {
      sol.status = SolveStatus::Infeasible;
      sol.x = x_p;
      sol.max_residual = inf_norm(A * x_p - b);
      return sol;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    lu.setThreshold(tol);
    N = lu.kernel();
    if (lu.dimensionOfKernel() == 0)
      N = Eigen::MatrixXd::Zero(n, 0);
  }

  Eigen::VectorXd x = x_p;
  if (N.cols() > 0) {
    Eigen::MatrixXd H = N.transpose() * f_quad.asDiagonal() * N;
    Eigen::VectorXd g = N.transpose() * (f_quad.asDiagonal() * x_p + f);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(H);
    const Eigen::VectorXd &ev = es.eigenvalues();
    const Eigen::MatrixXd &V = es.eigenvectors();
    const double scale = std::max(1.0, inf_norm(ev));
    Eigen::VectorXd c = V.transpose() * (-g);
    Eigen::VectorXd z = Eigen::VectorXd::Zero(N.cols());
    for (long i = 0; i < ev.size(); ++i) {
      if (std::abs(ev(i)) <= tol * scale) {
        if (std::abs(c(i)) > tol * (1.0 + inf_norm(g))) {
          sol.status = SolveStatus::Unbounded;
          sol.x = x_p;
          return sol;
        }
        if (options.regularization > 0.0)
          z(i) = c(i) / options.regularization;
        else
          throw Error(errc::singular_kkt,
                      "reduced Hessian is singular; solution not unique "
                      "(enable regularization)");
      } else {
        z(i) = c(i) / ev(i);
      }
    }
    x = x_p + N * (V * z);
  }

  Eigen::VectorXd grad = f_quad.asDiagonal() * x + f;
  Eigen::VectorXd lambda(long(a.rows));
  if (a.rows > 0) {
    Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> codT(
        A.transpose());
    lambda = codT.solve(-grad);
    sol.stationarity_residual = inf_norm(grad + A.transpose() * lambda);
    sol.max_residual = inf_norm(A * x - b);
  } else {
    sol.stationarity_residual = inf_norm(grad);
  }
  sol.multipliers["equalities"] = lambda;
  sol.x = x;
  sol.objective = 0.5 * x.dot(f_quad.asDiagonal() * x) + f.dot(x);
  const double ref = 1.0 + inf_norm(b) + inf_norm(f);
  sol.status = (sol.max_residual <= tol * ref &&
                sol.stationarity_residual <= std::sqrt(tol) * ref)
                   ? SolveStatus::Optimal
                   : SolveStatus::MaxIterations;
  return sol;
}

Solution solve_box_qp(const Eigen::VectorXd &f_quad,
                      const Eigen::VectorXd &f_lin, const CooMatrix &a,
                      const Eigen::VectorXd &b, const Eigen::VectorXd &lower,
                      const Eigen::VectorXd &upper,
                      const SolveOptions &options) {
  const long n = f_quad.size();
  if (lower.size() != n || upper.size() != n)
    throw Error(errc::dim_mismatch, "bound vector length mismatch");
  for (long i = 0; i < n; ++i)
    if (lower(i) > upper(i)) {
      Solution s;
      s.status = SolveStatus::Infeasible;
      s.x = Eigen::VectorXd::Zero(n);
      return s;
    }
  const double tol = options.tolerance;

  // -1 lower active, +1 upper active, 0 free.
  std::vector<int> active(std::size_t(n), 0);
  Solution sub;
  for (std::size_t iter = 0; iter < options.max_iterations; ++iter) {
    CooMatrix a2 = a;
    std::vector<long> bound_rows;
    std::vector<double> rhs_extra;
    for (long i = 0; i < n; ++i)
      if (active[std::size_t(i)] != 0) {
        a2.rows += 1;
        a2.add(a2.rows - 1, std::size_t(i), 1.0);
        bound_rows.push_back(i);
        rhs_extra.push_back(active[std::size_t(i)] < 0 ? lower(i) : upper(i));
      }
    a2.cols = std::size_t(n);
    Eigen::VectorXd b2(long(a2.rows));
    b2.head(b.size()) = b;
    for (std::size_t j = 0; j < rhs_extra.size(); ++j)
      b2(b.size() + long(j)) = rhs_extra[j];

    sub = solve_equality_qp(f_quad, f_lin, a2, b2, options);
    if (sub.status == SolveStatus::Infeasible)
      return sub;
    if (sub.status == SolveStatus::Unbounded) {
      // Cut off the ray with the first finite, inactive bound.
      bool added = false;
      for (long i = 0; i < n && !added; ++i)
        if (active[std::size_t(i)] == 0) {
          if (std::isfinite(lower(i))) {
            active[std::size_t(i)] = -1;
            added = true;
          } else if (std::isfinite(upper(i))) {
            active[std::size_t(i)] = 1;
            added = true;
          }
        }
      if (!added)
        return sub;
      continue;
    }

    // Most violated inactive bound enters the working set.
    long worst = -1;
    int worst_side = 0;
    double worst_gap = tol * (1.0 + inf_norm(sub.x));
    for (long i = 0; i < n; ++i) {
      if (active[std::size_t(i)] != 0)
        continue;
      const double vl = lower(i) - sub.x(i);
      const double vu = sub.x(i) - upper(i);
      if (vl > worst_gap) {
        worst_gap = vl;
        worst = i;
        worst_side = -1;
      }
      if (vu > worst_gap) {
        worst_gap = vu;
        worst = i;
        worst_side = 1;
      }
    }
    if (worst >= 0) {
      active[std::size_t(worst)] = worst_side;
      continue;
    }

    // All bounds satisfied; check bound multipliers. Row i of the augmented
    // system gives g_i = -lambda_bound_i, so optimality needs lambda <= 0 on
    // active lower bounds and >= 0 on active upper bounds.
    const Eigen::VectorXd &lam = sub.multipliers["equalities"];
    long drop = -1;
    double drop_mag = tol * (1.0 + inf_norm(lam));
    for (std::size_t j = 0; j < bound_rows.size(); ++j) {
      const double lj = lam(b.size() + long(j));
      const long var = bound_rows[j];
      const double bad = active[std::size_t(var)] < 0 ? lj : -lj;
      if (bad > drop_mag) {
        drop_mag = bad;
        drop = var;
      }
    }
    if (drop >= 0) {
      active[std::size_t(drop)] = 0;
      continue;
    }

    Solution out = sub;
    Eigen::VectorXd lam_bounds = Eigen::VectorXd::Zero(n);
    for (std::size_t j = 0; j < bound_rows.size(); ++j)
      lam_bounds(bound_rows[j]) = lam(b.size() + long(j));
    out.multipliers["equalities"] = lam.head(b.size());
    out.multipliers["bounds"] = lam_bounds;
    out.max_residual = b.size() ? inf_norm(
        [&] {
          Eigen::VectorXd r = -b;
          for (const auto &t : a.triplets)
            r(long(t.row)) += t.value * out.x(long(t.col));
          return r;
        }()) : 0.0;
    out.status = SolveStatus::Optimal;
    return out;
  }
  sub.status = SolveStatus::MaxIterations;
  return sub;
}

namespace {

// Capabilities a forward pass can fix at each step, by pin or device claim.
std::vector<bool> flow_coverage(const HfnmcfProblem &problem) {
  const auto &spec = problem.spec();
  std::vector<bool> covered(problem.layout().n_transitions, false);
  for (const auto &pin : spec.pins)
    if (pin.side != PinSide::Plus)
      covered[problem.model().capability_index(pin.capability)] = true;
  for (const auto &dev : spec.devices)
    if (dev.explicit_eval)
      for (std::size_t psi : dev.determines_flows)
        covered[psi] = true;
  return covered;
}

bool explicit_in_state(const HfnmcfProblem &problem) {
  for (const auto &dev : problem.spec().devices)
    if (dev.kind == DeviceKind::Equality && !dev.explicit_eval)
      return false;
  return true;
}

} // namespace

Solution forward_propagate(const HfnmcfProblem &problem,
                           const SolveOptions &options) {
  const auto &spec = problem.spec();
  const StepLayout &layout = problem.layout();
  const std::size_t K = problem.horizon();
  const std::size_t W = layout.width();
  const std::size_t na = spec.aux_names.size();
  const double dt = problem.dt();

  auto covered = flow_coverage(problem);
  for (std::size_t psi = 0; psi < covered.size(); ++psi)
    if (!covered[psi])
      throw Error(errc::underdetermined_step,
                  "no pin or device model determines flow '" +
                      problem.model().capabilities()[psi].id + "'");
  for (const auto &dev : spec.devices)
    if (dev.kind == DeviceKind::Equality && !dev.explicit_eval &&
        (!dev.determines_flows.empty() || !dev.determines_aux.empty()))
      throw Error(errc::underdetermined_step,
                  "device '" + dev.name + "' is not explicit-in-state");

  Solution sol;
  sol.x = Eigen::VectorXd::Zero(long(problem.x_size()));
  sol.y = Eigen::VectorXd::Zero(long(problem.y_size()));

  for (const auto &pin : spec.initial) {
    std::size_t off = pin.section == StateSection::QB   ? layout.q_b_off()
                      : pin.section == StateSection::QE ? layout.q_e_off()
                                                        : layout.q_sl_off();
    sol.x(long(off + pin.index)) = pin.value;
  }

  std::vector<bool> flow_set(layout.n_transitions, false);
  for (std::size_t k = 0; k < K; ++k) {
    auto xk = sol.x.segment(long(k * W), long(W));
    auto yk = na ? sol.y.segment(long(k * na), long(na))
                 : sol.y.segment(0, 0);
    auto resolver = problem.exogenous_resolver(k);

    for (const auto &[idx, track] : spec.aux_mirrors)
      yk(long(idx)) = problem.exogenous_at(track, k);
    for (const auto &[idx, v] : spec.aux_constants)
      yk(long(idx)) = v;

    std::fill(flow_set.begin(), flow_set.end(), false);
    StepMut mut(layout, xk, yk, resolver, k, dt, flow_set, sol.warnings);

    for (const auto &pin : spec.pins) {
      const std::size_t psi = problem.model().capability_index(pin.capability);
      const double v =
          pin.series.size() == 1 ? pin.series[0] : pin.series.at(k);
      if (pin.side != PinSide::Plus) {
        xk(long(layout.u_minus_off() + psi)) = v;
        flow_set[psi] = true;
      }
      if (pin.side != PinSide::Minus)
        xk(long(layout.u_plus_off() + psi)) = v;
    }

    try {
      for (const auto &dev : spec.devices)
        if (dev.explicit_eval)
          dev.explicit_eval(mut);
    } catch (const Error &e) {
      if (e.code() == errc::division_by_zero ||
          e.code() == errc::nonfinite_value)
        throw Error(errc::nonfinite_state,
                    std::string("non-finite device evaluation at step ") +
                        std::to_string(k) + ": " + e.what());
      throw;
    }

    for (std::size_t psi = 0; psi < flow_set.size(); ++psi)
      if (!flow_set[psi])
        throw Error(errc::underdetermined_step,
                    "flow '" + problem.model().capabilities()[psi].id +
                        "' undetermined at step " + std::to_string(k));

    // Output firings lag input firings by the capability duration.
    for (std::size_t psi = 0; psi < layout.n_transitions; ++psi) {
      const std::size_t kd = std::size_t(problem.durations()[psi]);
      if (kd > 0)
        xk(long(layout.u_plus_off() + psi)) =
            k >= kd
                ? sol.x(long(problem.x_slot(k - kd, layout.u_minus_off() + psi)))
                : 0.0;
    }

    if (spec.sync) {
      for (std::size_t r = 0; r < layout.n_operand_transitions; ++r) {
        xk(long(layout.u_l_minus_off() + r)) = 0.0;
        xk(long(layout.u_l_plus_off() + r)) = 0.0;
      }
      for (const auto &t : spec.sync->lambda_minus.triplets)
        xk(long(layout.u_l_minus_off() + t.row)) +=
            t.value * xk(long(layout.u_minus_off() + t.col));
      for (const auto &t : spec.sync->lambda_plus.triplets)
        xk(long(layout.u_l_plus_off() + t.row)) +=
            t.value * xk(long(layout.u_plus_off() + t.col));
    }
    for (const auto &pin : spec.operand_pins) {
      const double v =
          pin.series.size() == 1 ? pin.series[0] : pin.series.at(k);
      if (pin.side != PinSide::Plus)
        xk(long(layout.u_l_minus_off() + pin.stacked_transition)) = v;
      if (pin.side != PinSide::Minus)
        xk(long(layout.u_l_plus_off() + pin.stacked_transition)) = v;
    }

    if (!xk.allFinite() || (na && !yk.allFinite()))
      throw Error(errc::nonfinite_state,
                  "non-finite value at step " + std::to_string(k));

    auto xn = sol.x.segment(long((k + 1) * W), long(W));
    xn = xk;
    for (const auto &t : problem.incidence().m_plus.triplets)
      xn(long(layout.q_b_off() + t.row)) +=
          dt * t.value * xk(long(layout.u_plus_off() + t.col));
    for (const auto &t : problem.incidence().m_minus.triplets)
      xn(long(layout.q_b_off() + t.row)) -=
          dt * t.value * xk(long(layout.u_minus_off() + t.col));
    for (std::size_t tr = 0; tr < layout.n_transitions; ++tr)
      xn(long(layout.q_e_off() + tr)) +=
          dt * (xk(long(layout.u_minus_off() + tr)) -
                xk(long(layout.u_plus_off() + tr)));
    {
      std::size_t place_base = 0, trans_base = 0;
      for (const auto &net : spec.operand_nets) {
        for (const auto &t : net.incidence.m_plus.triplets)
          xn(long(layout.q_sl_off() + place_base + t.row)) +=
              dt * t.value *
              xk(long(layout.u_l_plus_off() + trans_base + t.col));
        for (const auto &t : net.incidence.m_minus.triplets)
          xn(long(layout.q_sl_off() + place_base + t.row)) -=
              dt * t.value *
              xk(long(layout.u_l_minus_off() + trans_base + t.col));
        place_base += net.incidence.place_count();
        trans_base += net.incidence.capability_count();
      }
      for (std::size_t tr = 0; tr < layout.n_operand_transitions; ++tr)
        xn(long(layout.q_el_off() + tr)) +=
            dt * (xk(long(layout.u_l_minus_off() + tr)) -
                  xk(long(layout.u_l_plus_off() + tr)));
    }
    // The copied step carries firings forward; clear them on the new step.
    for (std::size_t s = layout.u_minus_off(); s < W; ++s)
      xn(long(s)) = 0.0;

    if (!xn.allFinite())
      throw Error(errc::nonfinite_state,
                  "non-finite state after step " + std::to_string(k));
  }

  auto residuals = evaluate_residuals(problem, sol.x, sol.y);
  sol.max_residual = max_equality_residual(residuals);
  sol.status = sol.max_residual <= options.tolerance ? SolveStatus::Optimal
                                                     : SolveStatus::MaxIterations;
  return sol;
}

Solution solve(const HfnmcfProblem &problem, const SolveOptions &options) {
  SolveMode mode = options.mode;
  if (mode == SolveMode::Auto) {
    auto covered = flow_coverage(problem);
    const bool all_covered =
        std::all_of(covered.begin(), covered.end(), [](bool b) { return b; });
    mode = (problem.objective_is_null() && all_covered &&
            explicit_in_state(problem))
               ? SolveMode::ForwardPropagate
               : SolveMode::KktDirect;
  }
  if (mode == SolveMode::ForwardPropagate)
    return forward_propagate(problem, options);

  const auto &spec = problem.spec();
  for (const auto &dev : spec.devices)
    if (!dev.linear)
      throw Error(errc::invalid_document,
                  "nonlinear device model '" + dev.name +
                      "' requires forward propagation");

  const std::size_t K = problem.horizon();
  const std::size_t W = problem.layout().width();
  const std::size_t nx = problem.x_size();
  const auto &alias = problem.alias();

  Eigen::VectorXd fq = Eigen::VectorXd::Zero(long(nx));
  Eigen::VectorXd fl = Eigen::VectorXd::Zero(long(nx));
  for (std::size_t k = 0; k <= K; ++k)
    for (std::size_t s = 0; s < W; ++s) {
      const std::size_t i = alias[k * W + s];
      if (spec.f_quad_diag.size())
        fq(long(i)) += spec.f_quad_diag(long(s));
      if (spec.f_lin.size())
        fl(long(i)) += spec.f_lin(long(s));
    }

  CooMatrix A;
  A.cols = nx;
  std::vector<std::pair<std::string, std::pair<std::size_t, std::size_t>>> spans;
  std::vector<double> rhs;
  for (const auto &blk : problem.blocks()) {
    const std::size_t row0 = A.rows;
    A.rows += blk.a.rows;
    for (const auto &t : blk.a.triplets)
      A.add(row0 + t.row, t.col, t.value);
    for (long r = 0; r < blk.b.size(); ++r)
      rhs.push_back(blk.b(r));
    spans.push_back({blk.name, {row0, blk.a.rows}});
  }
  for (const auto &dev : spec.devices) {
    if (dev.kind != DeviceKind::Equality)
      continue;
    const std::size_t row0 = A.rows;
    A.rows += K;
    for (std::size_t k = 0; k < K; ++k) {
      for (const auto &[slot, coeff] : dev.linear_x)
        A.add(row0 + k, alias[k * W + slot], coeff);
      double b = dev.linear_const;
      if (!dev.linear_exo_track.empty())
        b += dev.linear_exo_coeff *
             problem.exogenous_at(dev.linear_exo_track, k);
      rhs.push_back(b);
    }
    spans.push_back({"device:" + dev.name, {row0, K}});
  }
  A.sort_and_combine();
  Eigen::VectorXd b =
      Eigen::Map<const Eigen::VectorXd>(rhs.data(), long(rhs.size()));

  const double inf = std::numeric_limits<double>::infinity();
  Eigen::VectorXd lower = Eigen::VectorXd::Constant(long(nx), -inf);
  Eigen::VectorXd upper = Eigen::VectorXd::Constant(long(nx), inf);
  bool have_bounds = false;
  if (spec.bounds) {
    have_bounds = true;
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t j = 0; j < spec.bounds->x_slots.size(); ++j) {
        const std::size_t i = alias[k * W + spec.bounds->x_slots[j]];
        lower(long(i)) = std::max(lower(long(i)), spec.bounds->lower(long(j)));
        upper(long(i)) = std::min(upper(long(i)), spec.bounds->upper(long(j)));
      }
  }

  // Reduce to columns the system actually touches; everything else is free
  // and set to zero.
  std::vector<long> to_compact(nx, -1);
  std::vector<std::size_t> cols;
  auto use = [&](std::size_t c) {
    if (to_compact[c] < 0) {
      to_compact[c] = long(cols.size());
      cols.push_back(c);
    }
  };
  for (const auto &t : A.triplets)
    use(t.col);
  for (std::size_t i = 0; i < nx; ++i)
    if (alias[i] == i &&
        (fq(long(i)) != 0.0 || fl(long(i)) != 0.0 ||
         std::isfinite(lower(long(i))) || std::isfinite(upper(long(i)))))
      use(i);

  CooMatrix Ac;
  Ac.rows = A.rows;
  Ac.cols = cols.size();
  for (const auto &t : A.triplets)
    Ac.add(t.row, std::size_t(to_compact[t.col]), t.value);
  Eigen::VectorXd fqc(long(cols.size())), flc(long(cols.size())),
      loc(long(cols.size())), upc(long(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j) {
    fqc(long(j)) = fq(long(cols[j]));
    flc(long(j)) = fl(long(cols[j]));
    loc(long(j)) = lower(long(cols[j]));
    upc(long(j)) = upper(long(cols[j]));
  }

  Solution sub = have_bounds
                     ? solve_box_qp(fqc, flc, Ac, b, loc, upc, options)
                     : solve_equality_qp(fqc, flc, Ac, b, options);

  Solution sol;
  sol.status = sub.status;
  sol.objective = sub.objective;
  sol.stationarity_residual = sub.stationarity_residual;
  sol.warnings = sub.warnings;
  sol.x = Eigen::VectorXd::Zero(long(nx));
  if (sub.x.size() == long(cols.size()))
    for (std::size_t j = 0; j < cols.size(); ++j)
      sol.x(long(cols[j])) = sub.x(long(j));
  for (std::size_t i = 0; i < nx; ++i)
    if (alias[i] != i)
      sol.x(long(i)) = sol.x(long(alias[i]));

  const std::size_t na = spec.aux_names.size();
  sol.y = Eigen::VectorXd::Zero(long(problem.y_size()));
  for (std::size_t k = 0; k < K; ++k) {
    for (const auto &[idx, track] : spec.aux_mirrors)
      sol.y(long(k * na + idx)) = problem.exogenous_at(track, k);
    for (const auto &[idx, v] : spec.aux_constants)
      sol.y(long(k * na + idx)) = v;
  }

  auto eq = sub.multipliers.find("equalities");
  if (eq != sub.multipliers.end() && eq->second.size() == long(A.rows))
    for (const auto &[name, span] : spans)
      sol.multipliers[name] =
          eq->second.segment(long(span.first), long(span.second));
  auto bd = sub.multipliers.find("bounds");
  if (bd != sub.multipliers.end()) {
    Eigen::VectorXd full = Eigen::VectorXd::Zero(long(nx));
    for (std::size_t j = 0; j < cols.size(); ++j)
      full(long(cols[j])) = bd->second(long(j));
    sol.multipliers["bounds"] = full;
  }

  if (sol.status == SolveStatus::Optimal || sol.status == SolveStatus::MaxIterations) {
    auto residuals = evaluate_residuals(problem, sol.x, sol.y);
    sol.max_residual = max_equality_residual(residuals);
  }
  return sol;
}

Trajectory solution_trajectory(const HfnmcfProblem &problem,
                               const Solution &solution) {
  const StepLayout &layout = problem.layout();
  const std::size_t K = problem.horizon();
  const std::size_t W = layout.width();
  const std::size_t na = problem.spec().aux_names.size();

  std::vector<std::string> columns{"k"};
  for (const auto &l : problem.place_labels())
    columns.push_back(l);
  for (const auto &c : problem.model().capabilities())
    columns.push_back(c.id);
  for (const auto &a : problem.spec().aux_names)
    columns.push_back(a);
  Trajectory traj(columns);

  for (std::size_t k = 0; k <= K; ++k) {
    std::vector<double> row{double(k)};
    for (std::size_t p = 0; p < layout.n_places; ++p)
      row.push_back(solution.x(long(k * W + layout.q_b_off() + p)));
    for (std::size_t t = 0; t < layout.n_transitions; ++t)
      row.push_back(solution.x(long(k * W + layout.u_minus_off() + t)));
    for (std::size_t i = 0; i < na; ++i)
      row.push_back(k < K ? solution.y(long(k * na + i)) : 0.0);
    traj.append_row(std::move(row));
  }
  return traj;
}

} // namespace hfgtflow
