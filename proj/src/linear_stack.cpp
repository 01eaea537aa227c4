#include "fimsim/linear_stack.hpp"

#include <memory>

#include "fimsim/cpr.hpp"
#include "fimsim/krylov.hpp"
#include "fimsim/ras.hpp"
#include "fimsim/reorder.hpp"

namespace fimsim {

const char* to_string(KrylovKind kind) { return kind == KrylovKind::Bicgstab ? "bicgstab" : "gmres"; }

const char* to_string(PrecondKind kind) {
  switch (kind) {
    case PrecondKind::None: return "none";
    case PrecondKind::Ras: return "ras";
    case PrecondKind::CprFpf: return "cpr-fpf";
  }
  return "?";
}

std::size_t LinearSolverConfig::iteration_cap() const {
  if (max_iter > 0) return max_iter;
  return krylov == KrylovKind::Bicgstab ? 300 : 100;
}

LinearStackResult solve_linear_system(const JacobianSystem& sys, std::span<const double> oil_potential,
                                      const Partition& partition, const LinearSolverConfig& config, double tol) {
  JacobianSystem work = config.decoupling == DecouplingKind::None
                            ? sys
                            : apply_decoupling(build_decoupler(sys, config.decoupling), sys);

  LinearStackResult out;
  const auto perm = config.reorder ? build_potential_permutation(oil_potential, partition, sys.blocks.n_wells)
                                   : identity_permutation(sys.blocks);
  if (config.reorder) {
    out.upper_fraction_before = strictly_upper_fraction(work);
    work = apply_permutation(perm, work);
    out.upper_fraction_after = strictly_upper_fraction(work);
  }

  std::unique_ptr<Preconditioner> pre;
  switch (config.precond) {
    case PrecondKind::None: pre = std::make_unique<IdentityPreconditioner>(); break;
    case PrecondKind::Ras:
      pre = std::make_unique<RasPreconditioner>(work.matrix, work.row_owner, work.num_workers, config.overlap);
      break;
    case PrecondKind::CprFpf:
      pre = std::make_unique<CprFpfPreconditioner>(work.matrix, work.blocks, work.row_owner, work.num_workers,
                                                   config.overlap, config.amg);
      break;
  }

  KrylovOptions opt;
  opt.tol = tol;
  opt.max_iter = config.iteration_cap();
  opt.restart = config.restart;
  const auto kr = config.krylov == KrylovKind::Bicgstab ? bicgstab(work.matrix, work.rhs, *pre, opt)
                                                        : gmres(work.matrix, work.rhs, *pre, opt);
  out.y = unpermute_solution(perm, kr.x);
  out.iterations = kr.iterations;
  out.relative_residual = kr.relative_residual();
  out.converged = kr.converged;
  out.breakdown = kr.breakdown;
  return out;
}

}  // namespace fimsim
