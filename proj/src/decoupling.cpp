#include "fimsim/decoupling.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <string>

#include "fimsim/error.hpp"

namespace fimsim {

const char* to_string(DecouplingKind kind) {
  switch (kind) {
    case DecouplingKind::None: return "none";
    case DecouplingKind::QuasiImpes: return "qi";
    case DecouplingKind::Abf: return "abf";
  }
  return "?";
}

DecouplingOperator build_decoupler(const JacobianSystem& sys, DecouplingKind kind) {
  const auto& bm = sys.blocks;
  const auto& a = sys.matrix;
  if (a.rows() != bm.size()) throw AssemblyError("build_decoupler: block map does not match matrix");
  DecouplingOperator d;
  d.kind = kind;
  d.blocks = bm;
  d.block.resize(bm.n_cells);
  d.inverse.resize(bm.n_cells);
  for (std::size_t c = 0; c < bm.n_cells; ++c) {
    const std::size_t ip = bm.pressure(c), is = bm.saturation(c);
    const double app = a.at(ip, ip), aps = a.at(ip, is), asp = a.at(is, ip), ass = a.at(is, is);
    switch (kind) {
      case DecouplingKind::None:
        d.block[c] = {1.0, 0.0, 0.0, 1.0};
        d.inverse[c] = {1.0, 0.0, 0.0, 1.0};
        break;
      case DecouplingKind::QuasiImpes: {
        const double f = ass != 0.0 ? aps / ass : 0.0;
        d.block[c] = {1.0, f, 0.0, 1.0};
        d.inverse[c] = {1.0, -f, 0.0, 1.0};
        break;
      }
      case DecouplingKind::Abf: {
        const double det = app * ass - aps * asp;
        const double scale = std::max({std::abs(app * ass), std::abs(aps * asp), 1e-300});
        if (!(std::abs(det) > 1e-14 * scale)) throw AssemblyError("ABF: singular diagonal block at cell " + std::to_string(c));
        d.block[c] = {app, aps, asp, ass};
        d.inverse[c] = {ass / det, -aps / det, -asp / det, app / det};
        break;
      }
    }
  }
  return d;
}

CsrMatrix DecouplingOperator::as_matrix() const {
  std::vector<Triplet> t;
  for (std::size_t c = 0; c < blocks.n_cells; ++c) {
    const auto& b = block[c];
    const std::size_t ip = blocks.pressure(c), is = blocks.saturation(c);
    t.push_back({ip, ip, b[0]});
    if (b[1] != 0.0) t.push_back({ip, is, b[1]});
    if (b[2] != 0.0) t.push_back({is, ip, b[2]});
    t.push_back({is, is, b[3]});
  }
  for (std::size_t w = 0; w < blocks.n_wells; ++w) t.push_back({blocks.well(w), blocks.well(w), 1.0});
  return CsrMatrix::from_triplets(blocks.size(), blocks.size(), std::move(t));
}

JacobianSystem apply_decoupling(const DecouplingOperator& d, const JacobianSystem& sys) {
  const auto& bm = sys.blocks;
  const auto& a = sys.matrix;
  if (bm.size() != d.blocks.size() || bm.n_cells != d.blocks.n_cells)
    throw AssemblyError("apply_decoupling: operator built for a different system");
  const std::size_t n = bm.n_cells;
  const std::size_t nrows = a.rows();

  // Row r of the result is built from rows (pair[r].first, pair[r].second).
  std::vector<std::vector<std::size_t>> cols(nrows);
  std::vector<std::vector<double>> vals(nrows);
  const auto nc = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t ci = 0; ci < nc; ++ci) {
    const auto c = static_cast<std::size_t>(ci);
    const std::size_t ip = bm.pressure(c), is = bm.saturation(c);
    const auto pc = a.row_cols(ip), sc = a.row_cols(is);
    const auto pv = a.row_values(ip), sv = a.row_values(is);
    std::vector<std::size_t> u;
    u.reserve(pc.size() + sc.size());
    std::set_union(pc.begin(), pc.end(), sc.begin(), sc.end(), std::back_inserter(u));
    std::vector<double> vp(u.size(), 0.0), vs(u.size(), 0.0);
    const auto& inv = d.inverse[c];
    std::size_t kp = 0, ks = 0;
    for (std::size_t k = 0; k < u.size(); ++k) {
      double xp = 0.0, xs = 0.0;
      if (kp < pc.size() && pc[kp] == u[k]) xp = pv[kp++];
      if (ks < sc.size() && sc[ks] == u[k]) xs = sv[ks++];
      vp[k] = inv[0] * xp + inv[1] * xs;
      vs[k] = inv[2] * xp + inv[3] * xs;
    }
    cols[is] = u;
    cols[ip] = std::move(u);
    vals[ip] = std::move(vp);
    vals[is] = std::move(vs);
  }
  for (std::size_t r = 2 * n; r < nrows; ++r) {
    cols[r].assign(a.row_cols(r).begin(), a.row_cols(r).end());
    vals[r].assign(a.row_values(r).begin(), a.row_values(r).end());
  }

  std::vector<std::size_t> ptr(nrows + 1, 0);
  for (std::size_t r = 0; r < nrows; ++r) ptr[r + 1] = ptr[r] + cols[r].size();
  std::vector<std::size_t> idx(ptr.back());
  std::vector<double> val(ptr.back());
  for (std::size_t r = 0; r < nrows; ++r) {
    std::copy(cols[r].begin(), cols[r].end(), idx.begin() + static_cast<std::ptrdiff_t>(ptr[r]));
    std::copy(vals[r].begin(), vals[r].end(), val.begin() + static_cast<std::ptrdiff_t>(ptr[r]));
  }

  JacobianSystem out;
  out.matrix = CsrMatrix(nrows, a.cols(), std::move(ptr), std::move(idx), std::move(val));
  out.rhs = sys.rhs;
  for (std::size_t c = 0; c < n; ++c) {
    const auto& inv = d.inverse[c];
    const double bp = sys.rhs[bm.pressure(c)], bs = sys.rhs[bm.saturation(c)];
    out.rhs[bm.pressure(c)] = inv[0] * bp + inv[1] * bs;
    out.rhs[bm.saturation(c)] = inv[2] * bp + inv[3] * bs;
  }
  out.blocks = bm;
  out.row_owner = sys.row_owner;
  out.num_workers = sys.num_workers;
  return out;
}

}  // namespace fimsim
