#pragma once

#include <span>
#include <vector>

#include "fimsim/csr.hpp"

namespace fimsim {

// Zero-fill incomplete LU on the pattern of A. L is unit lower triangular;
// both factors share one value array in A's pattern.
class Ilu0 {
 public:
  Ilu0() = default;
  explicit Ilu0(const CsrMatrix& a);

  // z = U^{-1} L^{-1} r
  void solve(std::span<const double> r, std::span<double> z) const;

  CsrMatrix lower() const;  // includes the unit diagonal
  CsrMatrix upper() const;
  std::size_t size() const { return lu_.rows(); }

 private:
  CsrMatrix lu_;
  std::vector<std::size_t> diag_;
};

Ilu0 ilu0_factor(const CsrMatrix& a);
std::vector<double> ilu0_solve(const Ilu0& factors, std::span<const double> r);

}  // namespace fimsim
