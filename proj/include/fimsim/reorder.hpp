#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/grid.hpp"
#include "fimsim/jacobian_system.hpp"

namespace fimsim {

// Per-worker ordering of owned cells by descending oil potential (ties by
// ascending cell index). Each worker keeps its own set of global positions,
// so the permutation never moves an unknown across workers.
struct PotentialPermutation {
  BlockMap blocks;
  // local_rank[w][l]: 0-based sorted position of worker w's l-th owned cell.
  std::vector<std::vector<std::size_t>> local_rank;
  std::vector<std::size_t> cell;     // old cell -> new cell
  std::vector<std::size_t> unknown;  // old unknown -> new unknown (Pt)
  std::vector<std::size_t> inverse;  // new unknown -> old unknown
};

PotentialPermutation build_potential_permutation(std::span<const double> potential, const Partition& partition,
                                                 std::size_t n_wells);
PotentialPermutation identity_permutation(const BlockMap& blocks);

// A~ = P A P^T, b~ = P b with row/column i of A moved to unknown[i].
JacobianSystem apply_permutation(const PotentialPermutation& perm, const JacobianSystem& sys);
std::vector<double> permute_vector(const PotentialPermutation& perm, std::span<const double> x);
std::vector<double> unpermute_solution(const PotentialPermutation& perm, std::span<const double> x_tilde);

// Fraction of the saturation block's nonzeros strictly above the diagonal.
double strictly_upper_fraction(const JacobianSystem& sys);

}  // namespace fimsim
