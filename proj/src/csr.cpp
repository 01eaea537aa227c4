#include "fimsim/csr.hpp"

#include <algorithm>
#include <iomanip>
#include <istream>
#include <ostream>
#include <string>

#include "fimsim/error.hpp"

namespace fimsim {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<std::size_t> row_ptr,
                     std::vector<std::size_t> col_idx, std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)), values_(std::move(values)) {
  if (row_ptr_.size() != rows_ + 1 || row_ptr_.front() != 0 || row_ptr_.back() != col_idx_.size() ||
      values_.size() != col_idx_.size())
    throw LinearAlgebraError("CsrMatrix: inconsistent array sizes");
  for (std::size_t r = 0; r < rows_; ++r) {
    if (row_ptr_[r + 1] < row_ptr_[r]) throw LinearAlgebraError("CsrMatrix: row offsets decrease");
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      if (col_idx_[k] >= cols_) throw LinearAlgebraError("CsrMatrix: column index out of range");
      if (k > row_ptr_[r] && col_idx_[k] <= col_idx_[k - 1])
        throw LinearAlgebraError("CsrMatrix: columns not sorted/unique in row " + std::to_string(r));
    }
  }
}

CsrMatrix CsrMatrix::identity(std::size_t n) {
  std::vector<std::size_t> ptr(n + 1), idx(n);
  for (std::size_t i = 0; i < n; ++i) {
    ptr[i + 1] = i + 1;
    idx[i] = i;
  }
  return CsrMatrix(n, n, std::move(ptr), std::move(idx), std::vector<double>(n, 1.0));
}

CsrMatrix CsrMatrix::from_triplets(std::size_t rows, std::size_t cols, std::vector<Triplet> entries) {
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
  std::vector<std::size_t> ptr(rows + 1, 0), idx;
  std::vector<double> val;
  for (const auto& t : entries) {
    if (t.row >= rows || t.col >= cols) throw LinearAlgebraError("from_triplets: index out of range");
    if (!idx.empty() && ptr[t.row + 1] > 0 && idx.back() == t.col && ptr[t.row + 1] == idx.size()) {
      val.back() += t.value;
      continue;
    }
    idx.push_back(t.col);
    val.push_back(t.value);
    ptr[t.row + 1] = idx.size();
  }
  for (std::size_t r = 0; r < rows; ++r) ptr[r + 1] = std::max(ptr[r + 1], ptr[r]);
  return CsrMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

CsrMatrix CsrMatrix::from_pattern(std::size_t cols, const std::vector<std::vector<std::size_t>>& row_columns) {
  const std::size_t rows = row_columns.size();
  std::vector<std::size_t> ptr(rows + 1, 0), idx;
  for (std::size_t r = 0; r < rows; ++r) {
    auto c = row_columns[r];
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
    idx.insert(idx.end(), c.begin(), c.end());
    ptr[r + 1] = idx.size();
  }
  std::vector<double> val(idx.size(), 0.0);
  return CsrMatrix(rows, cols, std::move(ptr), std::move(idx), std::move(val));
}

std::optional<std::size_t> CsrMatrix::find(std::size_t r, std::size_t c) const {
  const auto begin = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r]);
  const auto end = col_idx_.begin() + static_cast<std::ptrdiff_t>(row_ptr_[r + 1]);
  const auto it = std::lower_bound(begin, end, c);
  if (it == end || *it != c) return std::nullopt;
  return static_cast<std::size_t>(it - col_idx_.begin());
}

std::size_t CsrMatrix::position(std::size_t r, std::size_t c) const {
  if (auto p = find(r, c)) return *p;
  throw LinearAlgebraError("entry (" + std::to_string(r) + "," + std::to_string(c) + ") outside sparsity pattern");
}

double CsrMatrix::at(std::size_t r, std::size_t c) const {
  auto p = find(r, c);
  return p ? values_[*p] : 0.0;
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(std::min(rows_, cols_), 0.0);
  for (std::size_t r = 0; r < d.size(); ++r) d[r] = at(r, r);
  return d;
}

CsrMatrix CsrMatrix::transpose() const {
  std::vector<std::size_t> ptr(cols_ + 1, 0);
  for (std::size_t c : col_idx_) ++ptr[c + 1];
  for (std::size_t c = 0; c < cols_; ++c) ptr[c + 1] += ptr[c];
  std::vector<std::size_t> idx(nnz());
  std::vector<double> val(nnz());
  std::vector<std::size_t> next(ptr.begin(), ptr.end() - 1);
  for (std::size_t r = 0; r < rows_; ++r) {
    for (std::size_t k = row_ptr_[r]; k < row_ptr_[r + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      idx[dst] = r;
      val[dst] = values_[k];
    }
  }
  return CsrMatrix(cols_, rows_, std::move(ptr), std::move(idx), std::move(val));
}

bool CsrMatrix::same_pattern(const CsrMatrix& other) const {
  return rows_ == other.rows_ && cols_ == other.cols_ && row_ptr_ == other.row_ptr_ && col_idx_ == other.col_idx_;
}

CsrMatrix multiply(const CsrMatrix& a, const CsrMatrix& b) {
  if (a.cols() != b.rows()) throw LinearAlgebraError("multiply: dimension mismatch");
  const std::size_t n = a.rows();
  std::vector<std::size_t> ptr(n + 1, 0), idx;
  std::vector<double> val;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<std::size_t> marker(b.cols(), static_cast<std::size_t>(-1));
  std::vector<std::size_t> touched;
  for (std::size_t r = 0; r < n; ++r) {
    touched.clear();
    const auto acols = a.row_cols(r);
    const auto avals = a.row_values(r);
    for (std::size_t ka = 0; ka < acols.size(); ++ka) {
      const std::size_t k = acols[ka];
      const auto bcols = b.row_cols(k);
      const auto bvals = b.row_values(k);
      for (std::size_t kb = 0; kb < bcols.size(); ++kb) {
        const std::size_t c = bcols[kb];
        if (marker[c] != r) {
          marker[c] = r;
          acc[c] = 0.0;
          touched.push_back(c);
        }
        acc[c] += avals[ka] * bvals[kb];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::size_t c : touched) {
      idx.push_back(c);
      val.push_back(acc[c]);
    }
    ptr[r + 1] = idx.size();
  }
  return CsrMatrix(n, b.cols(), std::move(ptr), std::move(idx), std::move(val));
}

CsrMatrix principal_submatrix(const CsrMatrix& a, std::span<const std::size_t> indices) {
  std::vector<std::int64_t> local(a.cols(), -1);
  for (std::size_t l = 0; l < indices.size(); ++l) {
    if (l > 0 && indices[l] <= indices[l - 1]) throw LinearAlgebraError("principal_submatrix: indices not ascending");
    local[indices[l]] = static_cast<std::int64_t>(l);
  }
  std::vector<std::size_t> ptr(indices.size() + 1, 0), idx;
  std::vector<double> val;
  for (std::size_t l = 0; l < indices.size(); ++l) {
    const auto cols = a.row_cols(indices[l]);
    const auto vals = a.row_values(indices[l]);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const auto lc = local[cols[k]];
      if (lc < 0) continue;
      idx.push_back(static_cast<std::size_t>(lc));
      val.push_back(vals[k]);
    }
    ptr[l + 1] = idx.size();
  }
  return CsrMatrix(indices.size(), indices.size(), std::move(ptr), std::move(idx), std::move(val));
}

void write_coordinate(std::ostream& os, const CsrMatrix& a) {
  os << a.rows() << ' ' << a.cols() << ' ' << a.nnz() << '\n';
  os << std::setprecision(17);
  for (std::size_t r = 0; r < a.rows(); ++r) {
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) os << r << ' ' << cols[k] << ' ' << vals[k] << '\n';
  }
}

CsrMatrix read_coordinate(std::istream& is) {
  std::size_t rows = 0, cols = 0, nnz = 0;
  if (!(is >> rows >> cols >> nnz)) throw LinearAlgebraError("read_coordinate: bad header");
  std::vector<Triplet> t;
  t.reserve(nnz);
  for (std::size_t k = 0; k < nnz; ++k) {
    Triplet e{};
    if (!(is >> e.row >> e.col >> e.value)) throw LinearAlgebraError("read_coordinate: truncated entry list");
    t.push_back(e);
  }
  return CsrMatrix::from_triplets(rows, cols, std::move(t));
}

}  // namespace fimsim
