#include "fimsim/cpr.hpp"

#include <algorithm>
#include <numeric>
#include <vector>

#include "fimsim/error.hpp"
#include "fimsim/kernels.hpp"

namespace fimsim {

std::vector<double> restrict_pressure(std::span<const double> x, const BlockMap& blocks) {
  if (x.size() != blocks.size()) throw LinearAlgebraError("restrict_pressure: length mismatch");
  return {x.begin(), x.begin() + static_cast<std::ptrdiff_t>(blocks.n_cells)};
}

std::vector<double> prolong_pressure(std::span<const double> p, const BlockMap& blocks) {
  if (p.size() != blocks.n_cells) throw LinearAlgebraError("prolong_pressure: length mismatch");
  std::vector<double> x(blocks.size(), 0.0);
  std::copy(p.begin(), p.end(), x.begin());
  return x;
}

namespace {

CsrMatrix pressure_block(const CsrMatrix& a, std::size_t n) {
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  return principal_submatrix(a, idx);
}

}  // namespace

CprFpfPreconditioner::CprFpfPreconditioner(const CsrMatrix& a, const BlockMap& blocks,
                                           std::span<const int> row_owner, int num_workers, int overlap,
                                           const AmgConfig& amg)
    : a_(a),
      blocks_(blocks),
      ras_(a, row_owner, num_workers, overlap),
      amg_(amg_setup(pressure_block(a, blocks.n_cells), amg)) {
  if (a.rows() != blocks.size()) throw LinearAlgebraError("CPR: block map does not match matrix");
}

void CprFpfPreconditioner::apply(std::span<const double> f, std::span<double> x) const {
  const std::size_t n = a_.rows();
  std::vector<double> r(n), dx(n);
  ras_.apply(f, x);
  residual(a_, x, f, r);
  if (blocks_.n_cells > 0) {
    const auto rp = restrict_pressure(r, blocks_);
    std::vector<double> zp(rp.size());
    amg_apply(amg_, rp, zp);
    const auto zfull = prolong_pressure(zp, blocks_);
    axpy(1.0, zfull, x);
  }
  residual(a_, x, f, r);
  ras_.apply(r, dx);
  axpy(1.0, dx, x);
}

}  // namespace fimsim
