#include "fimsim/ilu0.hpp"

#include <cmath>

#include "fimsim/error.hpp"

namespace fimsim {

Ilu0::Ilu0(const CsrMatrix& a) : lu_(a) {
  const std::size_t n = a.rows();
  if (a.cols() != n) throw LinearAlgebraError("ilu0: matrix not square");
  diag_.resize(n);
  const auto ptr = lu_.row_ptr();
  const auto idx = lu_.col_idx();
  auto val = lu_.values();
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = lu_.find(i, i);
    if (!d) throw ZeroPivotError(i);
    diag_[i] = *d;
  }

  std::vector<std::ptrdiff_t> where(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) where[idx[k]] = static_cast<std::ptrdiff_t>(k);
    for (std::size_t kk = ptr[i]; kk < ptr[i + 1] && idx[kk] < i; ++kk) {
      const std::size_t k = idx[kk];
      const double pivot = val[diag_[k]];
      val[kk] /= pivot;
      const double lik = val[kk];
      for (std::size_t jj = diag_[k] + 1; jj < ptr[k + 1]; ++jj) {
        const auto pos = where[idx[jj]];
        if (pos >= 0) val[static_cast<std::size_t>(pos)] -= lik * val[jj];
      }
    }
    const double d = val[diag_[i]];
    if (d == 0.0 || !std::isfinite(d)) throw ZeroPivotError(i);
    for (std::size_t k = ptr[i]; k < ptr[i + 1]; ++k) where[idx[k]] = -1;
  }
}

void Ilu0::solve(std::span<const double> r, std::span<double> z) const {
  const std::size_t n = lu_.rows();
  if (r.size() != n || z.size() != n) throw LinearAlgebraError("ilu0 solve: length mismatch");
  const auto ptr = lu_.row_ptr();
  const auto idx = lu_.col_idx();
  const auto val = lu_.values();
  for (std::size_t i = 0; i < n; ++i) {
    double s = r[i];
    for (std::size_t k = ptr[i]; k < diag_[i]; ++k) s -= val[k] * z[idx[k]];
    z[i] = s;
  }
  for (std::size_t i = n; i-- > 0;) {
    double s = z[i];
    for (std::size_t k = diag_[i] + 1; k < ptr[i + 1]; ++k) s -= val[k] * z[idx[k]];
    z[i] = s / val[diag_[i]];
  }
}

CsrMatrix Ilu0::lower() const {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < lu_.rows(); ++i) {
    for (std::size_t k = lu_.row_ptr()[i]; k < diag_[i]; ++k) t.push_back({i, lu_.col_idx()[k], lu_.values()[k]});
    t.push_back({i, i, 1.0});
  }
  return CsrMatrix::from_triplets(lu_.rows(), lu_.cols(), std::move(t));
}

CsrMatrix Ilu0::upper() const {
  std::vector<Triplet> t;
  for (std::size_t i = 0; i < lu_.rows(); ++i)
    for (std::size_t k = diag_[i]; k < lu_.row_ptr()[i + 1]; ++k) t.push_back({i, lu_.col_idx()[k], lu_.values()[k]});
  return CsrMatrix::from_triplets(lu_.rows(), lu_.cols(), std::move(t));
}

Ilu0 ilu0_factor(const CsrMatrix& a) { return Ilu0(a); }

std::vector<double> ilu0_solve(const Ilu0& factors, std::span<const double> r) {
  std::vector<double> z(r.size());
  factors.solve(r, z);
  return z;
}

}  // namespace fimsim
