#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/csr.hpp"

namespace fimsim {

class Preconditioner {
 public:
  virtual ~Preconditioner() = default;
  // z = M^{-1} r. r and z never alias.
  virtual void apply(std::span<const double> r, std::span<double> z) const = 0;
};

class IdentityPreconditioner final : public Preconditioner {
 public:
  void apply(std::span<const double> r, std::span<double> z) const override;
};

struct KrylovOptions {
  double tol = 1e-4;          // relative to ||b||
  std::size_t max_iter = 300;
  std::size_t restart = 50;   // GMRES only
};

struct KrylovResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  double residual_norm = 0.0;   // ||b - A x|| recomputed from x
  double rhs_norm = 0.0;
  bool converged = false;
  bool breakdown = false;       // unrecoverable breakdown
  bool residual_drift = false;  // recursive and true residual disagree by more than 10*tol*||b||
  std::size_t preconditioner_applications = 0;

  double relative_residual() const { return rhs_norm > 0.0 ? residual_norm / rhs_norm : 0.0; }
};

// Right-preconditioned BiCGSTAB. A breakdown restarts once from the current
// iterate; a second breakdown ends the solve with breakdown set.
KrylovResult bicgstab(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m,
                      const KrylovOptions& opt, std::span<const double> x0 = {});

// Right-preconditioned restarted GMRES(m) with Givens rotations.
KrylovResult gmres(const CsrMatrix& a, std::span<const double> b, const Preconditioner& m, const KrylovOptions& opt,
                   std::span<const double> x0 = {});

}  // namespace fimsim
