#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/csr.hpp"
#include "fimsim/dense_lu.hpp"
#include "fimsim/krylov.hpp"

namespace fimsim {

struct AmgConfig {
  double strength_threshold = 0.08;  // finest level
  std::size_t max_coarse = 64;
  std::size_t max_levels = 25;
  double jacobi_weight = 2.0 / 3.0;
  double prolongator_weight = 4.0 / 3.0;  // divided by a Gershgorin bound of D^-1 A
};

struct AmgLevel {
  CsrMatrix a;
  CsrMatrix p;  // to this level from the next coarser one
  CsrMatrix r;  // transpose of p
  std::vector<double> inv_diag;
};

// Smoothed-aggregation hierarchy. levels.back() is the coarsest operator.
struct AmgHierarchy {
  std::vector<AmgLevel> levels;
  DenseLu coarse_lu;
  bool coarse_is_diagonal = false;
  bool diagonally_dominant = true;  // of the finest operator; setup still proceeds when false
  AmgConfig config;

  std::size_t num_levels() const { return levels.size(); }
};

// Aggregate id per node, from a symmetrised strength graph. Nodes without a
// strong neighbour become singletons.
std::vector<std::size_t> aggregate(const CsrMatrix& a, double theta, std::size_t& num_aggregates);

AmgHierarchy amg_setup(const CsrMatrix& a, const AmgConfig& config = {});
// One V(1,1) cycle from a zero initial guess.
void amg_apply(const AmgHierarchy& h, std::span<const double> r, std::span<double> z);

class AmgPreconditioner final : public Preconditioner {
 public:
  explicit AmgPreconditioner(const CsrMatrix& a, const AmgConfig& config = {}) : h_(amg_setup(a, config)) {}
  void apply(std::span<const double> r, std::span<double> z) const override { amg_apply(h_, r, z); }
  const AmgHierarchy& hierarchy() const { return h_; }

 private:
  AmgHierarchy h_;
};

}  // namespace fimsim
