#pragma once

#include <array>
#include <span>
#include <vector>

#include "fimsim/jacobian_system.hpp"

namespace fimsim {

enum class DecouplingKind { None, QuasiImpes, Abf };

const char* to_string(DecouplingKind kind);

// Block-diagonal left transformation: one 2x2 block per cell acting on the
// (pressure, saturation) row pair, identity on well rows.
struct DecouplingOperator {
  DecouplingKind kind = DecouplingKind::None;
  BlockMap blocks;
  // Per cell {d_pp, d_ps, d_sp, d_ss} of D and of D^-1.
  std::vector<std::array<double, 4>> block;
  std::vector<std::array<double, 4>> inverse;

  CsrMatrix as_matrix() const;
};

DecouplingOperator build_decoupler(const JacobianSystem& sys, DecouplingKind kind);

// Explicit D^-1 A and D^-1 b. The new pressure and saturation rows of a cell
// share the union of the two original row patterns.
JacobianSystem apply_decoupling(const DecouplingOperator& d, const JacobianSystem& sys);

}  // namespace fimsim
