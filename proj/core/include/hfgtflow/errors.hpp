#ifndef HFGTFLOW_ERRORS_HPP
#define HFGTFLOW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace hfgtflow {

/// Base error carrying a stable machine-readable code alongside the message.
class Error : public std::runtime_error {
public:
  Error(std::string code, const std::string &message)
      : std::runtime_error(code + ": " + message), code_(std::move(code)) {}

  const std::string &code() const { return code_; }

private:
  std::string code_;
};

namespace errc {
inline constexpr const char *dangling_reference = "DanglingReference";
inline constexpr const char *duplicate_id = "DuplicateId";
inline constexpr const char *kind_violation = "KindViolation";
inline constexpr const char *dim_mismatch = "DimMismatch";
inline constexpr const char *inconsistent_horizon = "InconsistentHorizon";
inline constexpr const char *overdetermined_initial_condition = "OverdeterminedInitialCondition";
inline constexpr const char *singular_kkt = "SingularKkt";
inline constexpr const char *underdetermined_step = "UnderdeterminedStep";
inline constexpr const char *nonfinite_state = "NonfiniteState";
inline constexpr const char *cyclic_auxiliary = "CyclicAuxiliary";
inline constexpr const char *nonfinite_value = "NonfiniteValue";
inline constexpr const char *division_by_zero = "DivisionByZero";
inline constexpr const char *non_stochastic_matrix = "NonStochasticMatrix";
inline constexpr const char *missing_column = "MissingColumn";
inline constexpr const char *non_monotone_index = "NonMonotoneIndex";
inline constexpr const char *gap_in_series = "GapInSeries";
inline constexpr const char *invalid_document = "InvalidDocument";
} // namespace errc

} // namespace hfgtflow

#endif
