#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "knotscope/bigint.hpp"

namespace knotscope {

/// Dense square-or-rectangular matrix over unbounded integers. Row and column
/// labels are carried along for diagnostics (region ids, Wirtinger arcs).
class IntMatrix {
public:
  IntMatrix() = default;
  IntMatrix(std::size_t rows, std::size_t cols);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  BigInt& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  const BigInt& at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::vector<std::string>& row_labels() { return row_labels_; }
  std::vector<std::string>& col_labels() { return col_labels_; }
  const std::vector<std::string>& row_labels() const { return row_labels_; }
  const std::vector<std::string>& col_labels() const { return col_labels_; }

  // Copy with row r and column c removed.
  IntMatrix minor(std::size_t r, std::size_t c) const;

  // Fraction-free (Bareiss) determinant. The empty matrix has determinant 1.
  BigInt determinant() const;

private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<BigInt> data_;
  std::vector<std::string> row_labels_;
  std::vector<std::string> col_labels_;
};

} // namespace knotscope
