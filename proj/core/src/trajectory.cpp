#include "hfgtflow/trajectory.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

namespace {

// Shortest representation that round-trips a double.
std::string format_double(double v) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::vector<std::string> split_csv_line(const std::string &line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream is(line);
  while (std::getline(is, field, ','))
    out.push_back(field);
  return out;
}

} // namespace

void Trajectory::append_row(std::vector<double> row) {
  if (row.size() != columns_.size())
    throw Error(errc::dim_mismatch, "trajectory row width mismatch");
  rows_.push_back(std::move(row));
}

long Trajectory::column_index(const std::string &name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i] == name)
      return static_cast<long>(i);
  return -1;
}

std::vector<double> Trajectory::column(const std::string &name) const {
  long idx = column_index(name);
  if (idx < 0)
    throw Error(errc::missing_column, "no trajectory column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows_.size());
  for (const auto &row : rows_)
    out.push_back(row[static_cast<std::size_t>(idx)]);
  return out;
}

std::string Trajectory::to_csv() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < columns_.size(); ++i)
    os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto &row : rows_) {
    for (std::size_t i = 0; i < row.size(); ++i)
      os << (i ? "," : "") << format_double(row[i]);
    os << '\n';
  }
  return os.str();
}

Trajectory Trajectory::from_csv(const std::string &text) {
  std::istringstream is(text);
  std::string line;
  if (!std::getline(is, line))
    throw Error(errc::invalid_document, "empty CSV");
  Trajectory t(split_csv_line(line));
  while (std::getline(is, line)) {
    if (line.empty())
      continue;
    auto fields = split_csv_line(line);
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto &f : fields) {
      double v = 0.0;
      auto [ptr, ec] = std::from_chars(f.data(), f.data() + f.size(), v);
      if (ec != std::errc() || ptr != f.data() + f.size())
        throw Error(errc::invalid_document, "bad numeric field '" + f + "'");
      row.push_back(v);
    }
    t.append_row(std::move(row));
  }
  return t;
}

} // namespace hfgtflow
