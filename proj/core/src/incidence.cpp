#include "hfgtflow/incidence.hpp"

#include <algorithm>
#include <sstream>

#include "hfgtflow/errors.hpp"

namespace hfgtflow {

Hfit::Hfit(TensorSign sign, std::size_t n_operands, std::size_t n_buffers,
           std::size_t n_capabilities)
    : sign_(sign), dims_{n_operands, n_buffers, n_capabilities} {}

void Hfit::add(std::size_t operand, std::size_t buffer, std::size_t capability,
               double weight) {
  if (operand >= dims_[0] || buffer >= dims_[1] || capability >= dims_[2])
    throw Error(errc::dim_mismatch, "tensor coordinate out of range");
  if (weight <= 0.0)
    throw Error(errc::kind_violation, "tensor weights must be positive");
  Entry e{operand, buffer, capability, weight};
  auto key = [](const Entry &a, const Entry &b) {
    return std::tie(a.operand, a.buffer, a.capability) <
           std::tie(b.operand, b.buffer, b.capability);
  };
  auto it = std::lower_bound(entries_.begin(), entries_.end(), e, key);
  if (it != entries_.end() && it->operand == operand && it->buffer == buffer &&
      it->capability == capability) {
    it->weight += weight; // accumulate repeated operand mentions
    return;
  }
  entries_.insert(it, e);
}

double Hfit::at(std::size_t operand, std::size_t buffer,
                std::size_t capability) const {
  for (const Entry &e : entries_)
    if (e.operand == operand && e.buffer == buffer &&
        e.capability == capability)
      return e.weight;
  return 0.0;
}

std::string Hfit::dump_coordinates() const {
  std::ostringstream os;
  for (const Entry &e : entries_)
    os << e.operand << ' ' << e.buffer << ' ' << e.capability << ' '
       << e.weight << '\n';
  return os.str();
}

void CooMatrix::add(std::size_t row, std::size_t col, double value) {
  if (row >= rows || col >= cols)
    throw Error(errc::dim_mismatch, "triplet out of range");
  triplets.push_back({row, col, value});
}

void CooMatrix::sort_and_combine() {
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet &a, const Triplet &b) {
              return std::tie(a.row, a.col) < std::tie(b.row, b.col);
            });
  std::vector<Triplet> merged;
  for (const Triplet &t : triplets) {
    if (!merged.empty() && merged.back().row == t.row &&
        merged.back().col == t.col)
      merged.back().value += t.value;
    else
      merged.push_back(t);
  }
  std::erase_if(merged, [](const Triplet &t) { return t.value == 0.0; });
  triplets = std::move(merged);
}

Eigen::MatrixXd CooMatrix::dense() const {
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(static_cast<long>(rows),
                                              static_cast<long>(cols));
  for (const Triplet &t : triplets)
    out(static_cast<long>(t.row), static_cast<long>(t.col)) += t.value;
  return out;
}

std::string CooMatrix::dump_coordinates() const {
  std::ostringstream os;
  for (const Triplet &t : triplets)
    os << t.row << ' ' << t.col << ' ' << t.value << '\n';
  return os.str();
}

std::pair<Hfit, Hfit> build_hfits(const SystemModel &model) {
  const std::size_t nl = model.operand_count();
  const std::size_t nb = model.buffer_count();
  const std::size_t ne = model.capability_count();
  Hfit neg(TensorSign::Negative, nl, nb, ne);
  Hfit pos(TensorSign::Positive, nl, nb, ne);

  for (std::size_t psi = 0; psi < ne; ++psi) {
    const Capability &c = model.capabilities()[psi];
    const Process &p = model.process_of(c);
    if (!model.is_environment(c.origin_buffer)) {
      std::size_t y = model.buffer_index(c.origin_buffer);
      for (const OperandQuantity &oq : p.inputs)
        neg.add(model.operand_index(oq.operand), y, psi, oq.quantity);
    }
    if (!model.is_environment(c.destination_buffer)) {
      std::size_t y = model.buffer_index(c.destination_buffer);
      for (const OperandQuantity &oq : p.outputs)
        pos.add(model.operand_index(oq.operand), y, psi, oq.quantity);
    }
  }
  return {std::move(neg), std::move(pos)};
}

IncidenceMatrices matricize(const Hfit &negative, const Hfit &positive) {
  if (negative.operand_dim() != positive.operand_dim() ||
      negative.buffer_dim() != positive.buffer_dim() ||
      negative.capability_dim() != positive.capability_dim())
    throw Error(errc::dim_mismatch, "tensors do not share dimensions");

  IncidenceMatrices out;
  out.n_operands = negative.operand_dim();
  out.n_buffers = negative.buffer_dim();
  const std::size_t rows = out.place_count();
  const std::size_t cols = negative.capability_dim();
  out.m_plus.rows = out.m_minus.rows = out.m.rows = rows;
  out.m_plus.cols = out.m_minus.cols = out.m.cols = cols;

  for (const Hfit::Entry &e : positive.entries()) {
    std::size_t r = out.place_row(e.operand, e.buffer);
    out.m_plus.add(r, e.capability, e.weight);
    out.m.add(r, e.capability, e.weight);
  }
  for (const Hfit::Entry &e : negative.entries()) {
    std::size_t r = out.place_row(e.operand, e.buffer);
    out.m_minus.add(r, e.capability, e.weight);
    out.m.add(r, e.capability, -e.weight);
  }
  out.m_plus.sort_and_combine();
  out.m_minus.sort_and_combine();
  out.m.sort_and_combine();
  return out;
}

} // namespace hfgtflow
