#ifndef HFGTFLOW_TRAJECTORY_HPP
#define HFGTFLOW_TRAJECTORY_HPP

#include <string>
#include <vector>

namespace hfgtflow {

/// Time-indexed record of named variables; one row per step k, first column
/// is always k itself. The unit of comparison between engines.
class Trajectory {
public:
  Trajectory() = default;
  explicit Trajectory(std::vector<std::string> columns)
      : columns_(std::move(columns)) {}

  const std::vector<std::string> &columns() const { return columns_; }
  const std::vector<std::vector<double>> &rows() const { return rows_; }
  std::size_t steps() const { return rows_.size(); }

  void append_row(std::vector<double> row);

  /// -1 when absent.
  long column_index(const std::string &name) const;
  std::vector<double> column(const std::string &name) const;

  std::string to_csv() const;
  static Trajectory from_csv(const std::string &text);

private:
  std::vector<std::string> columns_;
  std::vector<std::vector<double>> rows_;
};

} // namespace hfgtflow

#endif
