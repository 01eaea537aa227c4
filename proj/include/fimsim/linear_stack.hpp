#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "fimsim/amg.hpp"
#include "fimsim/decoupling.hpp"
#include "fimsim/grid.hpp"
#include "fimsim/jacobian_system.hpp"

namespace fimsim {

enum class KrylovKind { Bicgstab, Gmres };
enum class PrecondKind { None, Ras, CprFpf };

const char* to_string(KrylovKind kind);
const char* to_string(PrecondKind kind);

struct LinearSolverConfig {
  KrylovKind krylov = KrylovKind::Bicgstab;
  std::size_t restart = 50;
  std::size_t max_iter = 0;  // 0: 300 for BiCGSTAB, 100 for GMRES
  PrecondKind precond = PrecondKind::CprFpf;
  int overlap = 1;
  DecouplingKind decoupling = DecouplingKind::QuasiImpes;
  bool reorder = true;
  AmgConfig amg;

  std::size_t iteration_cap() const;
};

struct LinearStackResult {
  std::vector<double> y;  // in the original unknown order
  std::size_t iterations = 0;
  double relative_residual = 0.0;  // of the decoupled, permuted system
  bool converged = false;
  bool breakdown = false;
  double upper_fraction_before = 0.0;  // strictly-upper share of the saturation block
  double upper_fraction_after = 0.0;
};

// Decouple, reorder by oil potential, build the preconditioner, run the
// Krylov method to ||b~ - A~ y~|| <= tol ||b~|| and map the solution back.
LinearStackResult solve_linear_system(const JacobianSystem& sys, std::span<const double> oil_potential,
                                      const Partition& partition, const LinearSolverConfig& config, double tol);

}  // namespace fimsim
