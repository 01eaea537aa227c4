#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/csr.hpp"
#include "fimsim/ilu0.hpp"
#include "fimsim/krylov.hpp"

namespace fimsim {

// Restricted additive Schwarz with ILU(0) subdomain solves. Worker w's
// subdomain is its owned rows extended by `overlap` layers of the matrix
// graph; only owned entries of each local correction are kept.
class RasPreconditioner final : public Preconditioner {
 public:
  RasPreconditioner(const CsrMatrix& a, std::span<const int> row_owner, int num_workers, int overlap);

  void apply(std::span<const double> r, std::span<double> z) const override;

  int num_workers() const { return static_cast<int>(subdomains_.size()); }
  const std::vector<std::size_t>& subdomain_rows(int w) const { return subdomains_[w].rows; }

 private:
  struct Subdomain {
    std::vector<std::size_t> rows;  // ascending global indices
    std::vector<char> owned;        // per local row
    Ilu0 factors;
  };
  std::vector<Subdomain> subdomains_;
  std::size_t n_ = 0;
};

}  // namespace fimsim
