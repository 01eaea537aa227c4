#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/csr.hpp"

namespace fimsim {

// Row-major dense LU with partial pivoting. Used for AMG coarsest levels and
// as a direct reference solver.
class DenseLu {
 public:
  DenseLu() = default;
  DenseLu(std::size_t n, std::vector<double> a);
  explicit DenseLu(const CsrMatrix& a);

  std::size_t size() const { return n_; }
  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;

 private:
  void factor();

  std::size_t n_ = 0;
  std::vector<double> lu_;
  std::vector<std::size_t> piv_;
};

}  // namespace fimsim
