#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/csr.hpp"

namespace fimsim {

// Unknown layout [p (n) | s_w (n) | p_b (tau)].
struct BlockMap {
  std::size_t n_cells = 0;
  std::size_t n_wells = 0;

  std::size_t size() const { return 2 * n_cells + n_wells; }
  std::size_t pressure(std::size_t cell) const { return cell; }
  std::size_t saturation(std::size_t cell) const { return n_cells + cell; }
  std::size_t well(std::size_t w) const { return 2 * n_cells + w; }
};

struct JacobianSystem {
  CsrMatrix matrix;
  std::vector<double> rhs;  // -F
  BlockMap blocks;
  std::vector<int> row_owner;  // worker owning each row
  int num_workers = 1;
};

// Copies of indices [0, n): the pressure part of a full-system vector.
std::vector<double> restrict_pressure(std::span<const double> x, const BlockMap& blocks);
// (p, 0, 0) of length blocks.size().
std::vector<double> prolong_pressure(std::span<const double> p, const BlockMap& blocks);

}  // namespace fimsim
