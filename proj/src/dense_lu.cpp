#include "fimsim/dense_lu.hpp"

#include <cmath>
#include <utility>

#include "fimsim/error.hpp"

namespace fimsim {

DenseLu::DenseLu(std::size_t n, std::vector<double> a) : n_(n), lu_(std::move(a)) {
  if (lu_.size() != n * n) throw LinearAlgebraError("DenseLu: expected n*n entries");
  factor();
}

DenseLu::DenseLu(const CsrMatrix& a) : n_(a.rows()), lu_(a.rows() * a.rows(), 0.0) {
  if (a.cols() != n_) throw LinearAlgebraError("DenseLu: matrix not square");
  for (std::size_t r = 0; r < n_; ++r) {
    const auto cols = a.row_cols(r);
    const auto vals = a.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) lu_[r * n_ + cols[k]] = vals[k];
  }
  factor();
}

void DenseLu::factor() {
  piv_.resize(n_);
  double scale = 0.0;
  for (double v : lu_) scale = std::max(scale, std::abs(v));
  for (std::size_t k = 0; k < n_; ++k) {
    std::size_t p = k;
    for (std::size_t i = k + 1; i < n_; ++i)
      if (std::abs(lu_[i * n_ + k]) > std::abs(lu_[p * n_ + k])) p = i;
    piv_[k] = p;
    if (std::abs(lu_[p * n_ + k]) <= 1e-300 || std::abs(lu_[p * n_ + k]) <= 1e-15 * scale) throw ZeroPivotError(k);
    if (p != k)
      for (std::size_t j = 0; j < n_; ++j) std::swap(lu_[k * n_ + j], lu_[p * n_ + j]);
    const double d = lu_[k * n_ + k];
    for (std::size_t i = k + 1; i < n_; ++i) {
      const double l = lu_[i * n_ + k] /= d;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n_; ++j) lu_[i * n_ + j] -= l * lu_[k * n_ + j];
    }
  }
}

void DenseLu::solve(std::span<const double> b, std::span<double> x) const {
  if (b.size() != n_ || x.size() != n_) throw LinearAlgebraError("DenseLu: length mismatch");
  std::vector<double> y(b.begin(), b.end());
  for (std::size_t k = 0; k < n_; ++k) std::swap(y[k], y[piv_[k]]);
  for (std::size_t i = 0; i < n_; ++i)
    for (std::size_t j = 0; j < i; ++j) y[i] -= lu_[i * n_ + j] * y[j];
  for (std::size_t i = n_; i-- > 0;) {
    for (std::size_t j = i + 1; j < n_; ++j) y[i] -= lu_[i * n_ + j] * y[j];
    y[i] /= lu_[i * n_ + i];
  }
  std::copy(y.begin(), y.end(), x.begin());
}

std::vector<double> DenseLu::solve(std::span<const double> b) const {
  std::vector<double> x(b.size());
  solve(b, x);
  return x;
}

}  // namespace fimsim
