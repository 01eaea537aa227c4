#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <span>
#include <vector>

namespace fimsim {

struct Triplet {
  std::size_t row;
  std::size_t col;
  double value;
};

// Compressed sparse row matrix with sorted, unique column indices per row.
class CsrMatrix {
 public:
  CsrMatrix() = default;
  CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr, std::vector<std::size_t> col_idx,
            std::vector<double> values);

  static CsrMatrix identity(std::size_t n);
  // Duplicates are summed; explicit zeros are kept.
  static CsrMatrix from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries);
  // Pattern from per-row column lists (sorted and deduplicated here), values zero.
  static CsrMatrix from_pattern(std::size_t cols, const std::vector<std::vector<std::size_t>>& row_columns);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t nnz() const noexcept { return col_idx_.size(); }

  std::span<const std::size_t> row_ptr() const noexcept { return row_ptr_; }
  std::span<const std::size_t> col_idx() const noexcept { return col_idx_; }
  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  std::span<const std::size_t> row_cols(std::size_t r) const {
    return {col_idx_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }
  std::span<const double> row_values(std::size_t r) const {
    return {values_.data() + row_ptr_[r], row_ptr_[r + 1] - row_ptr_[r]};
  }

  // Position of (r, c) in the value array.
  std::optional<std::size_t> find(std::size_t r, std::size_t c) const;
  // As find(), throwing when the entry is outside the pattern.
  std::size_t position(std::size_t r, std::size_t c) const;
  double at(std::size_t r, std::size_t c) const;

  std::vector<double> diagonal() const;
  CsrMatrix transpose() const;

  bool same_pattern(const CsrMatrix& other) const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<std::size_t> col_idx_;
  std::vector<double> values_;
};

// Sparse product A*B.
CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b);

// Square submatrix on an ascending index set (rows and columns restricted to it).
CsrMatrix principal_submatrix(const CsrMatrix& a, std::span<const std::size_t> indices);

// Coordinate text format: header "rows cols nnz", then "row col value" lines (0-based).
void write_coordinate(std::ostream& os, const CsrMatrix& a);
CsrMatrix read_coordinate(std::istream& is);

}  // namespace fimsim
