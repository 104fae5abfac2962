#ifndef HFGTFLOW_HFNMCF_HPP
#define HFGTFLOW_HFNMCF_HPP

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hfgtflow/core_model.hpp"
#include "hfgtflow/incidence.hpp"
#include "hfgtflow/nets.hpp"

namespace hfgtflow {

/// Per-step decision vector layout, in this exact order:
///   x[k] = [Q_B; Q_E; Q_SL; Q_EL; U-; U+; U-_L; U+_L][k]
struct StepLayout {
  std::size_t n_places = 0;             // |L||B_S|
  std::size_t n_transitions = 0;        // |E_S|
  std::size_t n_operand_places = 0;     // sum over operand nets
  std::size_t n_operand_transitions = 0;

  std::size_t q_b_off() const { return 0; }
  std::size_t q_e_off() const { return n_places; }
  std::size_t q_sl_off() const { return n_places + n_transitions; }
  std::size_t q_el_off() const { return q_sl_off() + n_operand_places; }
  std::size_t u_minus_off() const { return q_el_off() + n_operand_transitions; }
  std::size_t u_plus_off() const { return u_minus_off() + n_transitions; }
  std::size_t u_l_minus_off() const { return u_plus_off() + n_transitions; }
  std::size_t u_l_plus_off() const {
    return u_l_minus_off() + n_operand_transitions;
  }
  std::size_t width() const {
    return u_l_plus_off() + n_operand_transitions;
  }
};

/// Read view of one step of (X, Y) for device-model evaluation.
class StepRef {
public:
  StepRef(const StepLayout &layout, Eigen::Ref<const Eigen::VectorXd> x,
          Eigen::Ref<const Eigen::VectorXd> y,
          std::function<double(const std::string &)> exogenous, std::size_t k,
          double dt)
      : layout_(&layout), x_(x), y_(y), exogenous_(std::move(exogenous)),
        k_(k), dt_(dt) {}

  double q_b(std::size_t place) const { return x_(long(layout_->q_b_off() + place)); }
  double q_e(std::size_t t) const { return x_(long(layout_->q_e_off() + t)); }
  /// Canonical flow value of capability psi (the input-firing slot; equal to
  /// the output firing under zero durations).
  double u(std::size_t psi) const { return x_(long(layout_->u_minus_off() + psi)); }
  double u_plus(std::size_t psi) const { return x_(long(layout_->u_plus_off() + psi)); }
  double aux(std::size_t i) const { return y_(long(i)); }
  double exo(const std::string &track) const { return exogenous_(track); }
  std::size_t k() const { return k_; }
  double dt() const { return dt_; }
  const StepLayout &layout() const { return *layout_; }

private:
  const StepLayout *layout_;
  Eigen::Ref<const Eigen::VectorXd> x_;
  Eigen::Ref<const Eigen::VectorXd> y_;
  std::function<double(const std::string &)> exogenous_;
  std::size_t k_;
  double dt_;
};

/// Write access used by explicit-in-state device models during forward
/// propagation. Setting a flow fixes both firing sides.
class StepMut {
public:
  StepMut(const StepLayout &layout, Eigen::Ref<Eigen::VectorXd> x,
          Eigen::Ref<Eigen::VectorXd> y,
          std::function<double(const std::string &)> exogenous, std::size_t k,
          double dt, std::vector<bool> &flow_set,
          std::vector<std::string> &warnings)
      : layout_(&layout), x_(x), y_(y), exogenous_(std::move(exogenous)),
        k_(k), dt_(dt), flow_set_(&flow_set), warnings_(&warnings) {}

  double q_b(std::size_t place) const { return x_(long(layout_->q_b_off() + place)); }
  double aux(std::size_t i) const { return y_(long(i)); }
  double exo(const std::string &track) const { return exogenous_(track); }
  std::size_t k() const { return k_; }

  void set_aux(std::size_t i, double v) { y_(long(i)) = v; }
  void warn(std::string message) { warnings_->push_back(std::move(message)); }
  void set_flow(std::size_t psi, double v) {
    x_(long(layout_->u_minus_off() + psi)) = v;
    x_(long(layout_->u_plus_off() + psi)) = v;
    (*flow_set_)[psi] = true;
  }

private:
  const StepLayout *layout_;
  Eigen::Ref<Eigen::VectorXd> x_;
  Eigen::Ref<Eigen::VectorXd> y_;
  std::function<double(const std::string &)> exogenous_;
  std::size_t k_;
  double dt_;
  std::vector<bool> *flow_set_;
  std::vector<std::string> *warnings_;
};

enum class DeviceKind { Equality, Inequality };

/// Application-specific constraint g(x,y)=0 or h(y)<=0, represented as a
/// residual callback. An explicit evaluator, when present, makes the device
/// usable by forward propagation; linear coefficients, when present, make it
/// usable by the direct KKT path.
struct DeviceModel {
  std::string name;
  DeviceKind kind = DeviceKind::Equality;
  std::size_t residual_dim = 1;
  std::function<Eigen::VectorXd(const StepRef &)> residual;

  std::function<void(StepMut &)> explicit_eval; // may be null
  std::vector<std::size_t> determines_flows;    // capability indices it fixes
  std::vector<std::size_t> determines_aux;

  bool linear = false;
  // Row over one step's x (slot index, coefficient) plus constant; a named
  // exogenous track contributes exo_coeff * track[k] to the constant side.
  std::vector<std::pair<std::size_t, double>> linear_x;
  double linear_const = 0.0;
  std::string linear_exo_track;
  double linear_exo_coeff = 0.0;
};

struct OperandNetSpec {
  std::string operand;
  std::vector<std::string> place_names;
  std::vector<std::string> transition_names;
  IncidenceMatrices incidence;
  std::vector<int> durations;
};

enum class PinSide { Minus, Plus, Both };

/// Exogenous pin on an engineering-system firing (boundary condition).
struct BoundaryPin {
  std::string capability;
  PinSide side = PinSide::Both;
  std::vector<double> series; // size 1 broadcasts over the horizon
};

struct OperandBoundaryPin {
  std::size_t stacked_transition = 0;
  PinSide side = PinSide::Both;
  std::vector<double> series;
};

enum class StateSection { QB, QE, QSL };

struct StatePin {
  StateSection section = StateSection::QB;
  std::size_t index = 0;
  double value = 0.0;
};

/// Optional per-step box bounds on selected x slots.
struct BoxBounds {
  std::vector<std::size_t> x_slots;
  Eigen::VectorXd lower;
  Eigen::VectorXd upper;
};

struct AssemblySpec {
  std::size_t horizon = 0;
  double dt = 1.0;
  Eigen::VectorXd f_quad_diag; // per-step diagonal of F_QP; empty means zero
  Eigen::VectorXd f_lin;       // per-step linear cost; empty means zero

  std::vector<OperandNetSpec> operand_nets;
  std::optional<SyncMatrices> sync;

  std::vector<BoundaryPin> pins;
  std::vector<OperandBoundaryPin> operand_pins;
  std::vector<StatePin> initial;
  std::optional<std::vector<StatePin>> final_conditions;
  std::optional<BoxBounds> bounds;

  std::vector<std::string> aux_names;
  /// Aux slots mirrored straight from an exogenous track (filled before
  /// device evaluation in forward propagation).
  std::map<std::size_t, std::string> aux_mirrors;
  std::map<std::size_t, double> aux_constants;
  std::vector<DeviceModel> devices;

  std::map<std::string, std::vector<double>> exogenous; // size 1 broadcasts
  std::vector<std::string> place_labels;                // optional override
};

enum class BlockStatus { Active, Collapsed, Relaxed };

struct BlockReport {
  std::string block;
  BlockStatus status;
  std::string reason;
};

struct CollapseReport {
  std::vector<BlockReport> blocks;

  BlockStatus status_of(const std::string &block) const;
  const std::string &reason_of(const std::string &block) const;
  std::string to_text() const;
};

struct EqualityBlock {
  std::string name;
  CooMatrix a; // over stacked X
  Eigen::VectorXd b;
};

/// Canonical time-expanded problem. The stacked primary vector X spans steps
/// 0..K (K+1 step slots); firings and device models act on steps 0..K-1.
class HfnmcfProblem {
public:
  const SystemModel &model() const { return model_; }
  const IncidenceMatrices &incidence() const { return incidence_; }
  const StepLayout &layout() const { return layout_; }
  const AssemblySpec &spec() const { return spec_; }
  std::size_t horizon() const { return spec_.horizon; }
  double dt() const { return spec_.dt; }

  std::size_t x_size() const { return (spec_.horizon + 1) * layout_.width(); }
  std::size_t y_size() const {
    return (spec_.horizon + 1) * spec_.aux_names.size();
  }
  std::size_t x_slot(std::size_t k, std::size_t offset) const {
    return k * layout_.width() + offset;
  }

  const std::vector<EqualityBlock> &blocks() const { return blocks_; }
  const CollapseReport &report() const { return report_; }
  const std::vector<int> &durations() const { return durations_; }
  bool firings_consolidated() const { return consolidated_; }
  /// Full-index alias map; identity where no consolidation applies.
  const std::vector<std::size_t> &alias() const { return alias_; }

  double exogenous_at(const std::string &track, std::size_t k) const;
  std::function<double(const std::string &)> exogenous_resolver(std::size_t k) const;

  std::vector<std::string> place_labels() const;
  bool objective_is_null() const;

  friend HfnmcfProblem assemble(const SystemModel &model, AssemblySpec spec);

private:
  SystemModel model_;
  IncidenceMatrices incidence_;
  StepLayout layout_;
  AssemblySpec spec_;
  std::vector<int> durations_;
  bool consolidated_ = false;
  std::vector<std::size_t> alias_;
  std::vector<EqualityBlock> blocks_;
  CollapseReport report_;
};

/// Builds all equality blocks, fixes the collapse report, and validates the
/// spec against the model. Errors: InconsistentHorizon,
/// OverdeterminedInitialCondition, DimMismatch, DanglingReference.
HfnmcfProblem assemble(const SystemModel &model, AssemblySpec spec);

CollapseReport collapse_report(const HfnmcfProblem &problem);

/// Residuals of every active block plus one "device:<name>" entry per device
/// model (stacked over steps 0..K-1).
std::map<std::string, Eigen::VectorXd>
evaluate_residuals(const HfnmcfProblem &problem, const Eigen::VectorXd &x,
                   const Eigen::VectorXd &y);

double max_equality_residual(const std::map<std::string, Eigen::VectorXd> &residuals);

} // namespace hfgtflow

#endif
