#include "hfgtflow/hfnmcf.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

BlockStatus CollapseReport::status_of(const std::string &block) const {
  for (const auto &b : blocks)
    if (b.block == block)
      return b.status;
  throw Error(errc::dangling_reference, "unknown block '" + block + "'");
}

const std::string &CollapseReport::reason_of(const std::string &block) const {
  for (const auto &b : blocks)
    if (b.block == block)
      return b.reason;
  throw Error(errc::dangling_reference, "unknown block '" + block + "'");
}

std::string CollapseReport::to_text() const {
  std::ostringstream os;
  for (const auto &b : blocks) {
    const char *s = b.status == BlockStatus::Active     ? "active"
                    : b.status == BlockStatus::Collapsed ? "collapsed"
                                                         : "relaxed";
    os << b.block << ": " << s;
    if (!b.reason.empty())
      os << " (" << b.reason << ")";
    os << '\n';
  }
  return os.str();
}

double HfnmcfProblem::exogenous_at(const std::string &track,
                                   std::size_t k) const {
  auto it = spec_.exogenous.find(track);
  if (it == spec_.exogenous.end())
    throw Error(errc::dangling_reference,
                "no exogenous track '" + track + "'");
  if (it->second.size() == 1)
    return it->second[0];
  if (k >= it->second.size())
    throw Error(errc::inconsistent_horizon,
                "exogenous track '" + track + "' shorter than horizon");
  return it->second[k];
}

std::function<double(const std::string &)>
HfnmcfProblem::exogenous_resolver(std::size_t k) const {
  return [this, k](const std::string &track) { return exogenous_at(track, k); };
}

std::vector<std::string> HfnmcfProblem::place_labels() const {
  if (!spec_.place_labels.empty())
    return spec_.place_labels;
  std::vector<std::string> out;
  auto buffers = model_.buffers();
  for (const auto &b : buffers)
    for (const auto &l : model_.operands())
      out.push_back(model_.operand_count() == 1 ? b.id : l.id + "@" + b.id);
  return out;
}

bool HfnmcfProblem::objective_is_null() const {
  auto all_zero = [](const Eigen::VectorXd &v) {
    return v.size() == 0 || v.isZero(0.0);
  };
  return all_zero(spec_.f_quad_diag) && all_zero(spec_.f_lin);
}

namespace {

struct Builder {
  const SystemModel &model;
  AssemblySpec &spec;
  StepLayout layout;
  std::size_t K;
  std::vector<std::size_t> alias;
  std::vector<EqualityBlock> blocks;
  bool esn_zero_duration = false;
  bool operand_zero_duration = false;

  std::size_t slot(std::size_t k, std::size_t off) const {
    return alias[k * layout.width() + off];
  }

  EqualityBlock &open(const std::string &name, std::size_t rows) {
    blocks.push_back({name, {}, Eigen::VectorXd::Zero(long(rows))});
    blocks.back().a.rows = rows;
    blocks.back().a.cols = (K + 1) * layout.width();
    return blocks.back();
  }
};

std::size_t pin_series_at(const std::vector<double> &series, std::size_t k,
                          std::size_t K, const std::string &what) {
  if (series.empty() || (series.size() > 1 && series.size() < K))
    throw Error(errc::inconsistent_horizon,
                what + " series shorter than horizon");
  (void)k;
  return series.size() == 1 ? 0 : k;
}

} // namespace

HfnmcfProblem assemble(const SystemModel &model, AssemblySpec spec) {
  HfnmcfProblem p;
  p.model_ = model;
  auto [neg, pos] = build_hfits(model);
  p.incidence_ = matricize(neg, pos);

  StepLayout layout;
  layout.n_places = p.incidence_.place_count();
  layout.n_transitions = p.incidence_.capability_count();
  for (const auto &net : spec.operand_nets) {
    layout.n_operand_places += net.incidence.place_count();
    layout.n_operand_transitions += net.incidence.capability_count();
    if (net.durations.size() != net.incidence.capability_count())
      throw Error(errc::dim_mismatch,
                  "operand net '" + net.operand + "' duration size mismatch");
  }
  p.layout_ = layout;

  const std::size_t K = spec.horizon;
  const std::size_t W = layout.width();

  if (spec.f_quad_diag.size() != 0 &&
      spec.f_quad_diag.size() != long(W))
    throw Error(errc::dim_mismatch, "F_QP diagonal length != step width");
  if (spec.f_quad_diag.size() != 0 && (spec.f_quad_diag.array() < 0.0).any())
    throw Error(errc::kind_violation,
                "F_QP must be positive semi-definite (diagonal entries >= 0)");
  if (spec.f_lin.size() != 0 && spec.f_lin.size() != long(W))
    throw Error(errc::dim_mismatch, "f_QP length != step width");
  if (!spec.place_labels.empty() &&
      spec.place_labels.size() != layout.n_places)
    throw Error(errc::dim_mismatch, "place label count != place count");
  if (spec.bounds) {
    const auto &b = *spec.bounds;
    if (b.lower.size() != long(b.x_slots.size()) ||
        b.upper.size() != long(b.x_slots.size()))
      throw Error(errc::dim_mismatch, "bound vector sizes mismatch");
    for (std::size_t s : b.x_slots)
      if (s >= W)
        throw Error(errc::dim_mismatch, "bound slot out of range");
    for (long i = 0; i < b.lower.size(); ++i)
      if (b.lower(i) > b.upper(i))
        throw Error(errc::kind_violation, "lower bound exceeds upper bound");
  }
  for (const auto &[idx, track] : spec.aux_mirrors) {
    if (idx >= spec.aux_names.size())
      throw Error(errc::dim_mismatch, "aux mirror index out of range");
    if (!spec.exogenous.count(track))
      throw Error(errc::dangling_reference,
                  "aux mirror track '" + track + "' missing");
  }
  for (const auto &[idx, v] : spec.aux_constants) {
    (void)v;
    if (idx >= spec.aux_names.size())
      throw Error(errc::dim_mismatch, "aux constant index out of range");
  }
  for (const auto &d : spec.devices) {
    if (!d.residual && d.residual_dim > 0 && !d.linear)
      throw Error(errc::invalid_document,
                  "device '" + d.name + "' has no residual evaluator");
    for (std::size_t f : d.determines_flows)
      if (f >= layout.n_transitions)
        throw Error(errc::dim_mismatch,
                    "device '" + d.name + "' determines unknown flow");
    for (std::size_t a : d.determines_aux)
      if (a >= spec.aux_names.size())
        throw Error(errc::dim_mismatch,
                    "device '" + d.name + "' determines unknown aux");
  }

  p.durations_.clear();
  for (const auto &c : model.capabilities())
    p.durations_.push_back(c.duration_steps);

  Builder bld{model, spec, layout, K, {}, {}, false, false};
  bld.esn_zero_duration =
      layout.n_transitions > 0 &&
      std::all_of(p.durations_.begin(), p.durations_.end(),
                  [](int d) { return d == 0; });
  bool all_opnet_zero = true;
  for (const auto &net : spec.operand_nets)
    for (int d : net.durations)
      if (d != 0)
        all_opnet_zero = false;
  bld.operand_zero_duration =
      layout.n_operand_transitions > 0 && all_opnet_zero;

  // Alias map: consolidation of firing sides and constant in-flight markings
  // under zero durations; state freezing when there are no transitions.
  bld.alias.resize((K + 1) * W);
  for (std::size_t i = 0; i < bld.alias.size(); ++i)
    bld.alias[i] = i;
  auto set_alias = [&](std::size_t k, std::size_t off, std::size_t k2,
                       std::size_t off2) {
    bld.alias[k * W + off] = k2 * W + off2;
  };
  if (bld.esn_zero_duration) {
    for (std::size_t k = 0; k <= K; ++k)
      for (std::size_t t = 0; t < layout.n_transitions; ++t) {
        set_alias(k, layout.u_plus_off() + t, k, layout.u_minus_off() + t);
        if (k > 0)
          set_alias(k, layout.q_e_off() + t, 0, layout.q_e_off() + t);
      }
  }
  if (bld.operand_zero_duration) {
    for (std::size_t k = 0; k <= K; ++k)
      for (std::size_t t = 0; t < layout.n_operand_transitions; ++t) {
        set_alias(k, layout.u_l_plus_off() + t, k,
                  layout.u_l_minus_off() + t);
        if (k > 0)
          set_alias(k, layout.q_el_off() + t, 0, layout.q_el_off() + t);
      }
  }
  if (layout.n_transitions == 0)
    for (std::size_t k = 1; k <= K; ++k)
      for (std::size_t pidx = 0; pidx < layout.n_places; ++pidx)
        set_alias(k, layout.q_b_off() + pidx, 0, layout.q_b_off() + pidx);

  CollapseReport report;
  auto note = [&](std::string block, BlockStatus st, std::string reason) {
    report.blocks.push_back({std::move(block), st, std::move(reason)});
  };

  // Objective.
  bool null_objective =
      (spec.f_quad_diag.size() == 0 || spec.f_quad_diag.isZero(0.0)) &&
      (spec.f_lin.size() == 0 || spec.f_lin.isZero(0.0));
  note("objective", null_objective ? BlockStatus::Collapsed : BlockStatus::Active,
       null_objective ? "feasibility problem (null objective Z = 0)" : "");

  // ESN continuity.
  if (layout.n_transitions == 0) {
    note("esn_continuity", BlockStatus::Collapsed,
         "no capabilities; buffer markings are constant");
  } else {
    note("esn_continuity", BlockStatus::Active, "");
    auto &blk = bld.open("esn_continuity", K * layout.n_places);
    for (std::size_t k = 0; k < K; ++k) {
      const std::size_t row0 = k * layout.n_places;
      for (std::size_t pl = 0; pl < layout.n_places; ++pl) {
        blk.a.add(row0 + pl, bld.slot(k + 1, layout.q_b_off() + pl), -1.0);
        blk.a.add(row0 + pl, bld.slot(k, layout.q_b_off() + pl), 1.0);
      }
      for (const auto &t : p.incidence_.m_plus.triplets)
        blk.a.add(row0 + t.row, bld.slot(k, layout.u_plus_off() + t.col),
                  t.value * spec.dt);
      for (const auto &t : p.incidence_.m_minus.triplets)
        blk.a.add(row0 + t.row, bld.slot(k, layout.u_minus_off() + t.col),
                  -t.value * spec.dt);
    }
  }

  // ESN transition marking and duration.
  if (layout.n_transitions == 0) {
    note("esn_transition_marking", BlockStatus::Collapsed, "no capabilities");
    note("esn_duration", BlockStatus::Collapsed, "no capabilities");
  } else if (bld.esn_zero_duration) {
    note("esn_transition_marking", BlockStatus::Collapsed,
         "zero-duration transitions carry no in-flight quantity");
    note("esn_duration", BlockStatus::Collapsed,
         "all capability durations are zero; firing vectors consolidate "
         "(U+ = U-)");
  } else {
    note("esn_transition_marking", BlockStatus::Active, "");
    auto &mk = bld.open("esn_transition_marking", K * layout.n_transitions);
    for (std::size_t k = 0; k < K; ++k)
      for (std::size_t t = 0; t < layout.n_transitions; ++t) {
        const std::size_t row = k * layout.n_transitions + t;
        mk.a.add(row, bld.slot(k + 1, layout.q_e_off() + t), -1.0);
        mk.a.add(row, bld.slot(k, layout.q_e_off() + t), 1.0);
        mk.a.add(row, bld.slot(k, layout.u_plus_off() + t), -spec.dt);
        mk.a.add(row, bld.slot(k, layout.u_minus_off() + t), spec.dt);
      }
    note("esn_duration", BlockStatus::Active, "");
    std::size_t nrows = 0;
    for (std::size_t t = 0; t < layout.n_transitions; ++t)
      for (std::size_t k = 0; k < K; ++k)
        if (k + std::size_t(p.durations_[t]) < K)
          ++nrows;
    auto &du = bld.open("esn_duration", nrows);
    std::size_t row = 0;
    for (std::size_t t = 0; t < layout.n_transitions; ++t) {
      const std::size_t kd = std::size_t(p.durations_[t]);
      for (std::size_t k = 0; k + kd < K; ++k) {
        du.a.add(row, bld.slot(k + kd, layout.u_plus_off() + t), -1.0);
        du.a.add(row, bld.slot(k, layout.u_minus_off() + t), 1.0);
        ++row;
      }
    }
  }

  // Operand net blocks.
  if (spec.operand_nets.empty()) {
    note("operand_continuity", BlockStatus::Collapsed, "no operand nets");
    note("operand_transition_marking", BlockStatus::Collapsed,
         "no operand nets");
    note("operand_duration", BlockStatus::Collapsed, "no operand nets");
  } else {
    note("operand_continuity", BlockStatus::Active, "");
    auto &oc = bld.open("operand_continuity", K * layout.n_operand_places);
    std::size_t place_base = 0, trans_base = 0;
    for (const auto &net : spec.operand_nets) {
      const std::size_t np = net.incidence.place_count();
      for (std::size_t k = 0; k < K; ++k) {
        const std::size_t row0 = k * layout.n_operand_places + place_base;
        for (std::size_t pl = 0; pl < np; ++pl) {
          oc.a.add(row0 + pl,
                   bld.slot(k + 1, layout.q_sl_off() + place_base + pl), -1.0);
          oc.a.add(row0 + pl,
                   bld.slot(k, layout.q_sl_off() + place_base + pl), 1.0);
        }
        for (const auto &t : net.incidence.m_plus.triplets)
          oc.a.add(row0 + t.row,
                   bld.slot(k, layout.u_l_plus_off() + trans_base + t.col),
                   t.value * spec.dt);
        for (const auto &t : net.incidence.m_minus.triplets)
          oc.a.add(row0 + t.row,
                   bld.slot(k, layout.u_l_minus_off() + trans_base + t.col),
                   -t.value * spec.dt);
      }
      place_base += np;
      trans_base += net.incidence.capability_count();
    }

    if (bld.operand_zero_duration) {
      note("operand_transition_marking", BlockStatus::Collapsed,
           "zero-duration operand transitions carry no in-flight quantity");
      note("operand_duration", BlockStatus::Collapsed,
           "all operand-net durations are zero; firing vectors consolidate");
    } else {
      note("operand_transition_marking", BlockStatus::Active, "");
      auto &om =
          bld.open("operand_transition_marking", K * layout.n_operand_transitions);
      for (std::size_t k = 0; k < K; ++k)
        for (std::size_t t = 0; t < layout.n_operand_transitions; ++t) {
          const std::size_t row = k * layout.n_operand_transitions + t;
          om.a.add(row, bld.slot(k + 1, layout.q_el_off() + t), -1.0);
          om.a.add(row, bld.slot(k, layout.q_el_off() + t), 1.0);
          om.a.add(row, bld.slot(k, layout.u_l_plus_off() + t), -spec.dt);
          om.a.add(row, bld.slot(k, layout.u_l_minus_off() + t), spec.dt);
        }
      note("operand_duration", BlockStatus::Active, "");
      std::vector<int> stacked;
      for (const auto &net : spec.operand_nets)
        stacked.insert(stacked.end(), net.durations.begin(),
                       net.durations.end());
      std::size_t nrows = 0;
      for (std::size_t t = 0; t < stacked.size(); ++t)
        for (std::size_t k = 0; k < K; ++k)
          if (k + std::size_t(stacked[t]) < K)
            ++nrows;
      auto &od = bld.open("operand_duration", nrows);
      std::size_t row = 0;
      for (std::size_t t = 0; t < stacked.size(); ++t) {
        const std::size_t kd = std::size_t(stacked[t]);
        for (std::size_t k = 0; k + kd < K; ++k) {
          od.a.add(row, bld.slot(k + kd, layout.u_l_plus_off() + t), -1.0);
          od.a.add(row, bld.slot(k, layout.u_l_minus_off() + t), 1.0);
          ++row;
        }
      }
    }
  }

  // Synchronization.
  bool have_sync = spec.sync && (!spec.sync->lambda_plus.triplets.empty() ||
                                 !spec.sync->lambda_minus.triplets.empty());
  if (!have_sync) {
    note("sync_plus", BlockStatus::Collapsed,
         spec.operand_nets.empty() ? "no operand nets"
                                   : "no synchronization constraints");
    note("sync_minus", BlockStatus::Collapsed,
         spec.operand_nets.empty() ? "no operand nets"
                                   : "no synchronization constraints");
  } else {
    const auto &sy = *spec.sync;
    auto validate = [&](const CooMatrix &lam, const char *which) {
      if (lam.rows != layout.n_operand_transitions ||
          lam.cols != layout.n_transitions)
        throw Error(errc::dim_mismatch,
                    std::string("sync selector ") + which + " dimension mismatch");
      std::set<std::size_t> seen;
      for (const auto &t : lam.triplets)
        if (!seen.insert(t.row).second)
          throw Error(errc::kind_violation,
                      "sync selector row has more than one nonzero");
    };
    validate(sy.lambda_plus, "plus");
    validate(sy.lambda_minus, "minus");
    auto emit = [&](const char *name, const CooMatrix &lam,
                    std::size_t ul_off, std::size_t u_off) {
      note(name, BlockStatus::Active, "");
      auto &blk = bld.open(name, K * layout.n_operand_transitions);
      for (std::size_t k = 0; k < K; ++k) {
        const std::size_t row0 = k * layout.n_operand_transitions;
        for (std::size_t r = 0; r < layout.n_operand_transitions; ++r)
          blk.a.add(row0 + r, bld.slot(k, ul_off + r), 1.0);
        for (const auto &t : lam.triplets)
          blk.a.add(row0 + t.row, bld.slot(k, u_off + t.col), -t.value);
      }
    };
    emit("sync_plus", sy.lambda_plus, layout.u_l_plus_off(),
         layout.u_plus_off());
    emit("sync_minus", sy.lambda_minus, layout.u_l_minus_off(),
         layout.u_minus_off());
  }

  // ESN boundary pins.
  if (spec.pins.empty()) {
    note("esn_boundary", BlockStatus::Collapsed, "no exogenous firing pins");
  } else {
    note("esn_boundary", BlockStatus::Active, "");
    std::size_t rows_per_k = 0;
    for (const auto &pin : spec.pins)
      rows_per_k +=
          (pin.side == PinSide::Both && !bld.esn_zero_duration) ? 2 : 1;
    auto &blk = bld.open("esn_boundary", K * rows_per_k);
    std::size_t row = 0;
    for (std::size_t k = 0; k < K; ++k) {
      for (const auto &pin : spec.pins) {
        const std::size_t psi = model.capability_index(pin.capability);
        const std::size_t si =
            pin_series_at(pin.series, k, K, "pin '" + pin.capability + "'");
        const double v = pin.series[si];
        if (pin.side != PinSide::Plus) {
          blk.a.add(row, bld.slot(k, layout.u_minus_off() + psi), 1.0);
          blk.b(long(row)) = v;
          ++row;
        }
        if (pin.side == PinSide::Plus ||
            (pin.side == PinSide::Both && !bld.esn_zero_duration)) {
          blk.a.add(row, bld.slot(k, layout.u_plus_off() + psi), 1.0);
          blk.b(long(row)) = v;
          ++row;
        }
      }
    }
  }

  // Operand boundary pins.
  if (spec.operand_pins.empty()) {
    note("operand_boundary", BlockStatus::Collapsed,
         spec.operand_nets.empty() ? "no operand nets"
                                   : "no operand firing pins");
  } else {
    note("operand_boundary", BlockStatus::Active, "");
    std::size_t rows_per_k = 0;
    for (const auto &pin : spec.operand_pins) {
      if (pin.stacked_transition >= layout.n_operand_transitions)
        throw Error(errc::dim_mismatch, "operand pin transition out of range");
      rows_per_k +=
          (pin.side == PinSide::Both && !bld.operand_zero_duration) ? 2 : 1;
    }
    auto &blk = bld.open("operand_boundary", K * rows_per_k);
    std::size_t row = 0;
    for (std::size_t k = 0; k < K; ++k)
      for (const auto &pin : spec.operand_pins) {
        const std::size_t si =
            pin_series_at(pin.series, k, K, "operand pin");
        const double v = pin.series[si];
        if (pin.side != PinSide::Plus) {
          blk.a.add(row,
                    bld.slot(k, layout.u_l_minus_off() + pin.stacked_transition),
                    1.0);
          blk.b(long(row)) = v;
          ++row;
        }
        if (pin.side == PinSide::Plus ||
            (pin.side == PinSide::Both && !bld.operand_zero_duration)) {
          blk.a.add(row,
                    bld.slot(k, layout.u_l_plus_off() + pin.stacked_transition),
                    1.0);
          blk.b(long(row)) = v;
          ++row;
        }
      }
  }

  // Initial conditions.
  {
    note("initial_conditions", BlockStatus::Active, "");
    std::set<std::pair<int, std::size_t>> seen;
    auto &blk = bld.open("initial_conditions", spec.initial.size());
    std::size_t row = 0;
    for (const auto &pin : spec.initial) {
      if (!seen.insert({int(pin.section), pin.index}).second)
        throw Error(errc::overdetermined_initial_condition,
                    "duplicate initial-condition selector");
      std::size_t off = pin.section == StateSection::QB   ? layout.q_b_off()
                        : pin.section == StateSection::QE ? layout.q_e_off()
                                                          : layout.q_sl_off();
      std::size_t limit = pin.section == StateSection::QB ? layout.n_places
                          : pin.section == StateSection::QE
                              ? layout.n_transitions
                              : layout.n_operand_places;
      if (pin.index >= limit)
        throw Error(errc::dim_mismatch, "initial-condition index out of range");
      blk.a.add(row, bld.slot(0, off + pin.index), 1.0);
      blk.b(long(row)) = pin.value;
      ++row;
    }
  }

  // Final conditions.
  if (!spec.final_conditions) {
    note("final_conditions", BlockStatus::Collapsed,
         "initial value problem (no final conditions)");
  } else {
    note("final_conditions", BlockStatus::Active, "");
    const auto &fins = *spec.final_conditions;
    const std::size_t extra =
        layout.n_transitions + layout.n_operand_transitions;
    auto &blk = bld.open("final_conditions", fins.size() + extra);
    std::size_t row = 0;
    for (const auto &pin : fins) {
      std::size_t off = pin.section == StateSection::QB   ? layout.q_b_off()
                        : pin.section == StateSection::QE ? layout.q_e_off()
                                                          : layout.q_sl_off();
      blk.a.add(row, bld.slot(K, off + pin.index), 1.0);
      blk.b(long(row)) = pin.value;
      ++row;
    }
    // Trailing firings after the horizon are pinned to zero.
    for (std::size_t t = 0; t < layout.n_transitions; ++t)
      blk.a.add(row++, bld.slot(K, layout.u_minus_off() + t), 1.0);
    for (std::size_t t = 0; t < layout.n_operand_transitions; ++t)
      blk.a.add(row++, bld.slot(K, layout.u_l_minus_off() + t), 1.0);
  }

  // Capacity bounds.
  if (!spec.bounds)
    note("capacity_bounds", BlockStatus::Relaxed,
         "no bounds on primary decision variables (relaxed to +/- infinity)");
  else
    note("capacity_bounds", BlockStatus::Active, "");

  // Device models.
  bool any_eq = false, any_ineq = false;
  for (const auto &d : spec.devices)
    (d.kind == DeviceKind::Equality ? any_eq : any_ineq) = true;
  note("device_equality", any_eq ? BlockStatus::Active : BlockStatus::Collapsed,
       any_eq ? "" : "no equality device models");
  note("device_inequality",
       any_ineq ? BlockStatus::Active : BlockStatus::Collapsed,
       any_ineq ? "" : "no inequality device models");

  for (auto &blk : bld.blocks)
    blk.a.sort_and_combine();

  p.spec_ = std::move(spec);
  p.consolidated_ = bld.esn_zero_duration;
  p.alias_ = std::move(bld.alias);
  p.blocks_ = std::move(bld.blocks);
  p.report_ = std::move(report);
  return p;
}

CollapseReport collapse_report(const HfnmcfProblem &problem) {
  return problem.report();
}

std::map<std::string, Eigen::VectorXd>
evaluate_residuals(const HfnmcfProblem &problem, const Eigen::VectorXd &x,
                   const Eigen::VectorXd &y) {
  if (x.size() != long(problem.x_size()) || y.size() != long(problem.y_size()))
    throw Error(errc::dim_mismatch, "X/Y sizes do not match problem layout");

  std::map<std::string, Eigen::VectorXd> out;
  for (const auto &blk : problem.blocks()) {
    Eigen::VectorXd r = -blk.b;
    for (const auto &t : blk.a.triplets)
      r(long(t.row)) += t.value * x(long(t.col));
    out[blk.name] = std::move(r);
  }

  const std::size_t K = problem.horizon();
  const std::size_t W = problem.layout().width();
  const std::size_t na = problem.spec().aux_names.size();
  for (const auto &dev : problem.spec().devices) {
    if (!dev.residual)
      continue;
    Eigen::VectorXd stacked(long(K * dev.residual_dim));
    for (std::size_t k = 0; k < K; ++k) {
      // Both segments must stay views; materializing a temporary here would
      // leave the StepRef dangling.
      StepRef ref(problem.layout(), x.segment(long(k * W), long(W)),
                  y.segment(long(k * na), long(na)),
                  problem.exogenous_resolver(k), k, problem.dt());
      Eigen::VectorXd r = dev.residual(ref);
      if (r.size() != long(dev.residual_dim))
        throw Error(errc::dim_mismatch,
                    "device '" + dev.name + "' residual dimension mismatch");
      if (dev.kind == DeviceKind::Inequality)
        r = r.cwiseMax(0.0); // violation magnitude of h(y) <= 0
      stacked.segment(long(k * dev.residual_dim), long(dev.residual_dim)) = r;
    }
    out["device:" + dev.name] = std::move(stacked);
  }
  return out;
}

double
max_equality_residual(const std::map<std::string, Eigen::VectorXd> &residuals) {
  double worst = 0.0;
  for (const auto &[name, r] : residuals)
    if (r.size() > 0)
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
  return worst;
}

} // namespace hfgtflow
