#ifndef HFGTFLOW_INCIDENCE_HPP
#define HFGTFLOW_INCIDENCE_HPP

#include <Eigen/Dense>
#include <cstddef>
#include <string>
#include <vector>

#include "hfgtflow/core_model.hpp"

namespace hfgtflow {

enum class TensorSign { Positive, Negative };

/// 3rd-order hetero-functional incidence tensor in coordinate form.
/// Entries are (operand i, buffer y, capability psi) -> weight > 0 with no
/// duplicate coordinates; storage is kept sorted lexicographically so that
/// repeated builds are bit-identical.
class Hfit {
public:
  struct Entry {
    std::size_t operand;
    std::size_t buffer;
    std::size_t capability;
    double weight;

    friend bool operator==(const Entry &, const Entry &) = default;
  };

  Hfit(TensorSign sign, std::size_t n_operands, std::size_t n_buffers,
       std::size_t n_capabilities);

  void add(std::size_t operand, std::size_t buffer, std::size_t capability,
           double weight);

  TensorSign sign() const { return sign_; }
  std::size_t operand_dim() const { return dims_[0]; }
  std::size_t buffer_dim() const { return dims_[1]; }
  std::size_t capability_dim() const { return dims_[2]; }
  const std::vector<Entry> &entries() const { return entries_; }
  bool empty() const { return entries_.empty(); }

  double at(std::size_t operand, std::size_t buffer,
            std::size_t capability) const;

  /// One "i y psi w" line per entry.
  std::string dump_coordinates() const;

private:
  TensorSign sign_;
  std::size_t dims_[3];
  std::vector<Entry> entries_;
};

/// Sparse matrix in deterministic (row-major sorted) triplet form.
struct CooMatrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
    friend bool operator==(const Triplet &, const Triplet &) = default;
  };
  std::vector<Triplet> triplets; // sorted by (row, col), coordinates unique

  void add(std::size_t row, std::size_t col, double value);
  void sort_and_combine();
  Eigen::MatrixXd dense() const;
  std::string dump_coordinates() const;
};

/// Matricized incidence: row of place (i, y) is y*|L| + i (buffer-major).
struct IncidenceMatrices {
  std::size_t n_operands = 0;
  std::size_t n_buffers = 0;
  CooMatrix m_plus;
  CooMatrix m_minus;
  CooMatrix m; // m_plus - m_minus, entry-wise

  std::size_t place_count() const { return n_operands * n_buffers; }
  std::size_t capability_count() const { return m_plus.cols; }
  std::size_t place_row(std::size_t operand, std::size_t buffer) const {
    return buffer * n_operands + operand;
  }
};

/// Builds the negative/positive tensors from the model: each capability's
/// process inputs become negative entries at its origin buffer and outputs
/// become positive entries at its destination buffer. Environment endpoints
/// contribute no entry.
std::pair<Hfit, Hfit> build_hfits(const SystemModel &model);

IncidenceMatrices matricize(const Hfit &negative, const Hfit &positive);

} // namespace hfgtflow

#endif
