#pragma once

#include <memory>
#include <span>

#include "fimsim/amg.hpp"
#include "fimsim/jacobian_system.hpp"
#include "fimsim/krylov.hpp"
#include "fimsim/ras.hpp"

namespace fimsim {

// Three-stage RAS -> pressure AMG -> RAS preconditioner.
//   x  = R(A)^-1 f
//   r  = f - A x
//   x += P_p AMG(A_pp)^-1 P_r r
//   r  = f - A x
//   x += R(A)^-1 r
class CprFpfPreconditioner final : public Preconditioner {
 public:
  CprFpfPreconditioner(const CsrMatrix& a, const BlockMap& blocks, std::span<const int> row_owner, int num_workers,
                       int overlap, const AmgConfig& amg = {});

  void apply(std::span<const double> f, std::span<double> x) const override;

  const RasPreconditioner& ras() const { return ras_; }
  const AmgHierarchy& amg() const { return amg_; }

 private:
  CsrMatrix a_;
  BlockMap blocks_;
  RasPreconditioner ras_;
  AmgHierarchy amg_;
};

}  // namespace fimsim
