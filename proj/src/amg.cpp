#include "fimsim/amg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fimsim/error.hpp"
#include "fimsim/kernels.hpp"

namespace fimsim {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();

std::vector<std::vector<std::size_t>> strength_graph(const CsrMatrix& a, double theta) {
  const std::size_t n = a.rows();
  const auto d = a.diagonal();
  std::vector<std::vector<std::size_t>> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      const std::size_t j = cols[k];
      if (j == i) continue;
      if (std::abs(vals[k]) >= theta * std::sqrt(std::abs(d[i] * d[j])) && vals[k] != 0.0) {
        g[i].push_back(j);
        g[j].push_back(i);
      }
    }
  }
  for (auto& row : g) {
    std::sort(row.begin(), row.end());
    row.erase(std::unique(row.begin(), row.end()), row.end());
  }
  return g;
}

bool is_diagonally_dominant(const CsrMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    double diag = 0.0, off = 0.0;
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) {
      if (cols[k] == i) diag = std::abs(vals[k]);
      else off += std::abs(vals[k]);
    }
    if (diag < off * (1.0 - 1e-12)) return false;
  }
  return true;
}

bool is_diagonal(const CsrMatrix& a) {
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const auto cols = a.row_cols(i);
    if (cols.size() != 1 || cols[0] != i) return false;
  }
  return true;
}

std::vector<double> inverse_diagonal(const CsrMatrix& a) {
  auto d = a.diagonal();
  for (double& v : d) v = v != 0.0 ? 1.0 / v : 0.0;
  return d;
}

CsrMatrix smoothed_prolongator(const CsrMatrix& a, const std::vector<std::size_t>& agg, std::size_t nc,
                               const std::vector<double>& inv_diag, double weight) {
  const std::size_t n = a.rows();
  double bound = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : a.row_values(i)) s += std::abs(v);
    bound = std::max(bound, s * std::abs(inv_diag[i]));
  }
  const double omega = bound > 0.0 ? weight / bound : 0.0;

  // P = (I - omega D^-1 A) T with T the piecewise-constant aggregate basis.
  std::vector<Triplet> t;
  t.reserve(a.nnz() + n);
  for (std::size_t i = 0; i < n; ++i) {
    t.push_back({i, agg[i], 1.0});
    const auto cols = a.row_cols(i);
    const auto vals = a.row_values(i);
    for (std::size_t k = 0; k < cols.size(); ++k) t.push_back({i, agg[cols[k]], -omega * inv_diag[i] * vals[k]});
  }
  return CsrMatrix::from_triplets(n, nc, std::move(t));
}

}  // namespace

std::vector<std::size_t> aggregate(const CsrMatrix& a, double theta, std::size_t& num_aggregates) {
  const std::size_t n = a.rows();
  const auto g = strength_graph(a, theta);
  std::vector<std::size_t> agg(n, kNone);
  std::size_t next = 0;

  // Pass 1: seeds whose whole strong neighbourhood is free.
  for (std::size_t i = 0; i < n; ++i) {
    if (agg[i] != kNone || g[i].empty()) continue;
    if (std::any_of(g[i].begin(), g[i].end(), [&](std::size_t j) { return agg[j] != kNone; })) continue;
    agg[i] = next;
    for (std::size_t j : g[i]) agg[j] = next;
    ++next;
  }
  // Pass 2: attach leftovers to the aggregate of their strongest aggregated neighbour.
  std::vector<std::size_t> pass2(n, kNone);
  for (std::size_t i = 0; i < n; ++i) {
    if (agg[i] != kNone || g[i].empty()) continue;
    double best = -1.0;
    for (std::size_t j : g[i]) {
      if (agg[j] == kNone) continue;
      const double w = std::abs(a.at(i, j)) + std::abs(a.at(j, i));
      if (w > best) {
        best = w;
        pass2[i] = agg[j];
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i)
    if (pass2[i] != kNone) agg[i] = pass2[i];
  // Pass 3: remaining nodes form aggregates with their free neighbours.
  for (std::size_t i = 0; i < n; ++i) {
    if (agg[i] != kNone) continue;
    agg[i] = next;
    for (std::size_t j : g[i])
      if (agg[j] == kNone) agg[j] = next;
    ++next;
  }
  num_aggregates = next;
  return agg;
}

AmgHierarchy amg_setup(const CsrMatrix& a, const AmgConfig& config) {
  if (a.rows() != a.cols()) throw LinearAlgebraError("AMG: matrix not square");
  AmgHierarchy h;
  h.config = config;
  h.diagonally_dominant = is_diagonally_dominant(a);
  h.levels.push_back({a, {}, {}, inverse_diagonal(a)});

  // Threshold halves on each coarser level.
  double theta = config.strength_threshold;
  while (h.levels.back().a.rows() > config.max_coarse && h.levels.size() < config.max_levels) {
    auto& fine = h.levels.back();
    std::size_t nc = 0;
    const auto agg = aggregate(fine.a, theta, nc);
    theta *= 0.5;
    if (nc == 0 || static_cast<double>(nc) > 0.9 * static_cast<double>(fine.a.rows())) break;
    CsrMatrix p = smoothed_prolongator(fine.a, agg, nc, fine.inv_diag, config.prolongator_weight);
    CsrMatrix r = p.transpose();
    CsrMatrix coarse = multiply(r, multiply(fine.a, p));
    fine.p = std::move(p);
    fine.r = std::move(r);
    auto inv = inverse_diagonal(coarse);
    h.levels.push_back({std::move(coarse), {}, {}, std::move(inv)});
  }

  h.coarse_is_diagonal = is_diagonal(h.levels.back().a);
  if (!h.coarse_is_diagonal) h.coarse_lu = DenseLu(h.levels.back().a);
  return h;
}

namespace {

void vcycle(const AmgHierarchy& h, std::size_t l, std::span<const double> r, std::span<double> z) {
  const auto& lev = h.levels[l];
  const std::size_t n = lev.a.rows();
  if (l + 1 == h.levels.size()) {
    if (h.coarse_is_diagonal) {
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] * lev.inv_diag[i];
    } else {
      h.coarse_lu.solve(r, z);
    }
    return;
  }
  const double w = h.config.jacobi_weight;
  for (std::size_t i = 0; i < n; ++i) z[i] = w * lev.inv_diag[i] * r[i];
  std::vector<double> res(n);
  residual(lev.a, z, r, res);
  const std::size_t nc = lev.p.cols();
  std::vector<double> rc(nc), zc(nc), corr(n);
  spmv(lev.r, res, rc);
  vcycle(h, l + 1, rc, zc);
  spmv(lev.p, zc, corr);
  axpy(1.0, corr, z);
  residual(lev.a, z, r, res);
  for (std::size_t i = 0; i < n; ++i) z[i] += w * lev.inv_diag[i] * res[i];
}

}  // namespace

void amg_apply(const AmgHierarchy& h, std::span<const double> r, std::span<double> z) {
  const std::size_t n = h.levels.front().a.rows();
  if (r.size() != n || z.size() != n) throw LinearAlgebraError("AMG apply: length mismatch");
  vcycle(h, 0, r, z);
}

}  // namespace fimsim
