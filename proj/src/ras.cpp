#include "fimsim/ras.hpp"

#include <algorithm>
#include <exception>

#include "fimsim/error.hpp"

namespace fimsim {

RasPreconditioner::RasPreconditioner(const CsrMatrix& a, std::span<const int> row_owner, int num_workers,
                                     int overlap)
    : n_(a.rows()) {
  if (a.cols() != n_) throw LinearAlgebraError("RAS: matrix not square");
  if (row_owner.size() != n_) throw LinearAlgebraError("RAS: owner list length mismatch");
  if (num_workers < 1) throw LinearAlgebraError("RAS: need at least one worker");
  if (overlap < 0) throw LinearAlgebraError("RAS: overlap must be non-negative");

  subdomains_.resize(static_cast<std::size_t>(num_workers));
  for (int w = 0; w < num_workers; ++w) {
    std::vector<char> in(n_, 0);
    std::vector<std::size_t> frontier;
    for (std::size_t i = 0; i < n_; ++i) {
      if (row_owner[i] == w) {
        in[i] = 1;
        frontier.push_back(i);
      }
    }
    for (int layer = 0; layer < overlap; ++layer) {
      std::vector<std::size_t> next;
      for (std::size_t i : frontier) {
        for (std::size_t c : a.row_cols(i)) {
          if (!in[c]) {
            in[c] = 1;
            next.push_back(c);
          }
        }
      }
      frontier.swap(next);
    }
    auto& sd = subdomains_[static_cast<std::size_t>(w)];
    for (std::size_t i = 0; i < n_; ++i) {
      if (in[i]) {
        sd.rows.push_back(i);
        sd.owned.push_back(row_owner[i] == w ? 1 : 0);
      }
    }
  }

  const int nw = num_workers;
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(nw));
#pragma omp parallel for schedule(dynamic)
  for (int w = 0; w < nw; ++w) {
    try {
      auto& sd = subdomains_[static_cast<std::size_t>(w)];
      if (!sd.rows.empty()) sd.factors = Ilu0(principal_submatrix(a, sd.rows));
    } catch (const ZeroPivotError& e) {
      const auto& rows = subdomains_[static_cast<std::size_t>(w)].rows;
      errors[static_cast<std::size_t>(w)] = std::make_exception_ptr(ZeroPivotError(rows[e.row()]));
    } catch (...) {
      errors[static_cast<std::size_t>(w)] = std::current_exception();
    }
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void RasPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != n_ || z.size() != n_) throw LinearAlgebraError("RAS apply: length mismatch");
  const int nw = num_workers();
#pragma omp parallel for schedule(dynamic)
  for (int w = 0; w < nw; ++w) {
    const auto& sd = subdomains_[static_cast<std::size_t>(w)];
    const std::size_t m = sd.rows.size();
    std::vector<double> rl(m), zl(m);
    for (std::size_t l = 0; l < m; ++l) rl[l] = r[sd.rows[l]];
    if (m > 0) sd.factors.solve(rl, zl);
    for (std::size_t l = 0; l < m; ++l)
      if (sd.owned[l]) z[sd.rows[l]] = zl[l];
  }
}

}  // namespace fimsim
