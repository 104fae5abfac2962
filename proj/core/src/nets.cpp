#include "hfgtflow/nets.hpp"

#include <cmath>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

namespace {

NetMarking step_impl(const NetMarking &marking, const Eigen::VectorXd &u_minus,
                     const Eigen::VectorXd &u_plus,
                     const IncidenceMatrices &incidence, double dt) {
  const long np = static_cast<long>(incidence.place_count());
  const long nt = static_cast<long>(incidence.capability_count());
  if (marking.q_b.size() != np || marking.q_e.size() != nt ||
      u_minus.size() != nt || u_plus.size() != nt)
    throw Error(errc::dim_mismatch, "marking/firing sizes do not match incidence");
  if (!(dt > 0.0))
    throw Error(errc::dim_mismatch, "time step must be positive");

  NetMarking next;
  next.q_b = marking.q_b;
  next.q_e = marking.q_e;
  for (const auto &t : incidence.m_plus.triplets)
    next.q_b(static_cast<long>(t.row)) +=
        t.value * u_plus(static_cast<long>(t.col)) * dt;
  for (const auto &t : incidence.m_minus.triplets)
    next.q_b(static_cast<long>(t.row)) -=
        t.value * u_minus(static_cast<long>(t.col)) * dt;
  next.q_e += (u_minus - u_plus) * dt;
  return next;
}

} // namespace

NetMarking esn_step(const NetMarking &marking, const Eigen::VectorXd &u_minus,
                    const Eigen::VectorXd &u_plus,
                    const IncidenceMatrices &incidence, double dt) {
  return step_impl(marking, u_minus, u_plus, incidence, dt);
}

NetMarking operand_net_step(const NetMarking &marking,
                            const Eigen::VectorXd &u_minus,
                            const Eigen::VectorXd &u_plus,
                            const IncidenceMatrices &incidence, double dt) {
  return step_impl(marking, u_minus, u_plus, incidence, dt);
}

std::vector<Violation> check_duration(const FiringSchedule &schedule,
                                      const std::vector<int> &durations,
                                      double tolerance) {
  std::vector<Violation> out;
  const std::size_t horizon = schedule.horizon();
  if (horizon == 0)
    return out;
  const long nt = schedule.u_minus[0].size();
  if (static_cast<long>(durations.size()) != nt)
    throw Error(errc::dim_mismatch, "duration vector size mismatch");

  for (long psi = 0; psi < nt; ++psi) {
    const std::size_t kd = static_cast<std::size_t>(durations[psi]);
    for (std::size_t k = 0; k + kd < horizon; ++k) {
      double diff =
          schedule.u_plus[k + kd](psi) - schedule.u_minus[k](psi);
      if (std::abs(diff) > tolerance)
        out.push_back({static_cast<std::size_t>(psi), k, diff});
    }
  }
  return out;
}

std::vector<Violation> check_sync(const FiringSchedule &system_schedule,
                                  const FiringSchedule &operand_schedule,
                                  const SyncMatrices &sync, double tolerance) {
  std::vector<Violation> out;
  const std::size_t horizon = system_schedule.horizon();
  if (operand_schedule.horizon() != horizon)
    throw Error(errc::dim_mismatch, "schedules disagree on horizon");

  auto check_side = [&](const CooMatrix &lambda,
                        const std::vector<Eigen::VectorXd> &u_l,
                        const std::vector<Eigen::VectorXd> &u,
                        std::size_t row_offset) {
    for (std::size_t k = 0; k < horizon; ++k) {
      if (u_l[k].size() != static_cast<long>(lambda.rows) ||
          u[k].size() != static_cast<long>(lambda.cols))
        throw Error(errc::dim_mismatch, "sync selector dimension mismatch");
      Eigen::VectorXd mapped = Eigen::VectorXd::Zero(u_l[k].size());
      for (const auto &t : lambda.triplets)
        mapped(static_cast<long>(t.row)) +=
            t.value * u[k](static_cast<long>(t.col));
      for (long r = 0; r < u_l[k].size(); ++r) {
        double diff = u_l[k](r) - mapped(r);
        if (std::abs(diff) > tolerance)
          out.push_back({row_offset + static_cast<std::size_t>(r), k, diff});
      }
    }
  };

  check_side(sync.lambda_plus, operand_schedule.u_plus, system_schedule.u_plus,
             0);
  check_side(sync.lambda_minus, operand_schedule.u_minus,
             system_schedule.u_minus, sync.lambda_plus.rows);
  return out;
}

} // namespace hfgtflow
