#include "fimsim/reorder.hpp"

#include <algorithm>
#include <numeric>

#include "fimsim/error.hpp"

namespace fimsim {

namespace {

void fill_unknown_map(PotentialPermutation& perm) {
  const auto& bm = perm.blocks;
  perm.unknown.resize(bm.size());
  perm.inverse.resize(bm.size());
  for (std::size_t c = 0; c < bm.n_cells; ++c) {
    perm.unknown[bm.pressure(c)] = bm.pressure(perm.cell[c]);
    perm.unknown[bm.saturation(c)] = bm.saturation(perm.cell[c]);
  }
  for (std::size_t w = 0; w < bm.n_wells; ++w) perm.unknown[bm.well(w)] = bm.well(w);
  for (std::size_t i = 0; i < bm.size(); ++i) perm.inverse[perm.unknown[i]] = i;
}

}  // namespace

PotentialPermutation build_potential_permutation(std::span<const double> potential, const Partition& partition,
                                                 std::size_t n_wells) {
  const std::size_t n = partition.owner.size();
  if (potential.size() != n) throw AssemblyError("potential permutation: field length mismatch");
  PotentialPermutation perm;
  perm.blocks = {n, n_wells};
  perm.cell.resize(n);
  perm.local_rank.resize(static_cast<std::size_t>(partition.num_workers));
  for (int w = 0; w < partition.num_workers; ++w) {
    const auto& own = partition.local_cells[static_cast<std::size_t>(w)];
    std::vector<std::size_t> order(own.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double pa = potential[own[a]], pb = potential[own[b]];
      if (pa != pb) return pa > pb;
      return own[a] < own[b];
    });
    auto& rank = perm.local_rank[static_cast<std::size_t>(w)];
    rank.resize(own.size());
    for (std::size_t pos = 0; pos < order.size(); ++pos) rank[order[pos]] = pos;
    for (std::size_t l = 0; l < own.size(); ++l) perm.cell[own[l]] = own[rank[l]];
  }
  fill_unknown_map(perm);
  return perm;
}

PotentialPermutation identity_permutation(const BlockMap& blocks) {
  PotentialPermutation perm;
  perm.blocks = blocks;
  perm.cell.resize(blocks.n_cells);
  std::iota(perm.cell.begin(), perm.cell.end(), std::size_t{0});
  perm.local_rank.push_back(perm.cell);
  fill_unknown_map(perm);
  return perm;
}

JacobianSystem apply_permutation(const PotentialPermutation& perm, const JacobianSystem& sys) {
  const auto& a = sys.matrix;
  const std::size_t n = a.rows();
  if (perm.unknown.size() != n || sys.rhs.size() != n) throw AssemblyError("apply_permutation: dimension mismatch");

  std::vector<std::size_t> ptr(n + 1, 0);
  for (std::size_t i = 0; i < n; ++i) ptr[perm.unknown[i] + 1] = a.row_cols(i).size();
  for (std::size_t i = 0; i < n; ++i) ptr[i + 1] += ptr[i];
  std::vector<std::size_t> idx(a.nnz());
  std::vector<double> val(a.nnz());
  const auto ni = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ii = 0; ii < ni; ++ii) {
    const auto i = static_cast<std::size_t>(ii);
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    std::vector<std::pair<std::size_t, double>> row(cols.size());
    for (std::size_t k = 0; k < cols.size(); ++k) row[k] = {perm.unknown[cols[k]], vals[k]};
    std::sort(row.begin(), row.end(), [](const auto& x, const auto& y) { return x.first < y.first; });
    const std::size_t base = ptr[perm.unknown[i]];
    for (std::size_t k = 0; k < row.size(); ++k) {
      idx[base + k] = row[k].first;
      val[base + k] = row[k].second;
    }
  }

  JacobianSystem out;
  out.matrix = CsrMatrix(n, n, std::move(ptr), std::move(idx), std::move(val));
  out.rhs = permute_vector(perm, sys.rhs);
  out.blocks = sys.blocks;
  out.row_owner.resize(sys.row_owner.size());
  for (std::size_t i = 0; i < sys.row_owner.size(); ++i) out.row_owner[perm.unknown[i]] = sys.row_owner[i];
  out.num_workers = sys.num_workers;
  return out;
}

std::vector<double> permute_vector(const PotentialPermutation& perm, std::span<const double> x) {
  if (x.size() != perm.unknown.size()) throw AssemblyError("permute_vector: length mismatch");
  std::vector<double> y(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) y[perm.unknown[i]] = x[i];
  return y;
}

std::vector<double> unpermute_solution(const PotentialPermutation& perm, std::span<const double> x_tilde) {
  if (x_tilde.size() != perm.unknown.size()) throw AssemblyError("unpermute_solution: length mismatch");
  std::vector<double> x(x_tilde.size());
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = x_tilde[perm.unknown[i]];
  return x;
}

double strictly_upper_fraction(const JacobianSystem& sys) {
  const auto& bm = sys.blocks;
  std::size_t total = 0, upper = 0;
  for (std::size_t c = 0; c < bm.n_cells; ++c) {
    const std::size_t r = bm.saturation(c);
    const auto cols = sys.matrix.row_cols(r);
    const auto vals = sys.matrix.row_values(r);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::size_t col = cols[k];
      if (col < bm.n_cells || col >= 2 * bm.n_cells || vals[k] == 0.0) continue;
      ++total;
      if (col > r) ++upper;
    }
  }
  return total > 0 ? static_cast<double>(upper) / static_cast<double>(total) : 0.0;
}

}  // namespace fimsim
