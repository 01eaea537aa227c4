#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fimsim/grid.hpp"
#include "fimsim/jacobian_system.hpp"
#include "fimsim/props.hpp"
#include "fimsim/wells.hpp"

namespace fimsim {

struct ReservoirModel {
  StructuredGrid grid;
  FluidModel fluid;
  std::vector<WellSpec> wells;
};

// p and s_w per cell, p_b for every well of the model (stopped wells included).
struct SimulationState {
  std::vector<double> p;
  std::vector<double> s;
  std::vector<double> pb;
  double t = 0.0;
};

struct EquilibriumSpec {
  double ref_depth = 0.0;     // ft
  double ref_pressure = 0.0;  // psi, oil phase at ref_depth
  double woc_depth = 0.0;     // ft
};

// Hydrostatic initialization: oil gradient above the water-oil contact,
// water gradient below it, p_w = p_o at the contact. s_w is the table
// minimum above the contact and the table maximum below it.
SimulationState initialize_equilibrium(const EquilibriumSpec& eq, const ReservoirModel& model);

struct FaceTransmissibility {
  double value = 0.0;  // mass flux per psi of potential difference, lbm/(day psi)
  std::size_t upstream = 0;
};

// Upstream-weighted transmissibility of one phase between face neighbours
// (0: oil, 1: water). Returns 0 for non-adjacent cells.
FaceTransmissibility upstream_transmissibility(const ReservoirModel& model, std::size_t cell_a, std::size_t cell_b,
                                               int phase, const SimulationState& state);

// Residual and Jacobian assembly for a fixed set of active wells (wells with
// an unknown p_b). Rows [0,n) hold the oil balances, [n,2n) the water
// balances, [2n,2n+tau) the well constraints. The sparsity pattern is built
// once and does not depend on the state.
class FimAssembler {
 public:
  FimAssembler(const ReservoirModel& model, const Partition& partition, std::vector<std::size_t> active_wells);

  const BlockMap& blocks() const { return blocks_; }
  const CsrMatrix& pattern() const { return pattern_; }
  const std::vector<int>& row_owner() const { return row_owner_; }
  const std::vector<std::size_t>& active_wells() const { return active_; }
  const Partition& partition() const { return *partition_; }
  const ReservoirModel& model() const { return *model_; }

  std::vector<double> pack(const SimulationState& state) const;
  // Writes x into state (p_b of inactive wells is left untouched).
  void unpack(std::span<const double> x, SimulationState& state) const;

  // controls: one per active well, in active_wells() order. When jac is
  // non-null its values are overwritten; it must carry pattern().
  void assemble(std::span<const double> x, const SimulationState& prev, double dt,
                std::span<const WellControl> controls, std::vector<double>& residual, CsrMatrix* jac) const;

  // Serial global-loop version of assemble(), kept as a reference.
  void assemble_reference(std::span<const double> x, const SimulationState& prev, double dt,
                          std::span<const WellControl> controls, std::vector<double>& residual,
                          CsrMatrix* jac) const;

  // Per active well, per perforation rates at x.
  std::vector<std::vector<PerforationRate>> perforation_rates(std::span<const double> x,
                                                              std::span<const WellControl> controls) const;

 private:
  struct Connection {
    std::size_t neighbor;
    double trans_geom;
  };
  struct PerfRef {
    std::size_t well;  // index into active_
    std::size_t perf;
  };

  const ReservoirModel* model_;
  const Partition* partition_;
  std::vector<std::size_t> active_;
  BlockMap blocks_;
  CsrMatrix pattern_;
  std::vector<int> row_owner_;
  std::vector<std::size_t> conn_ptr_;
  std::vector<Connection> conn_;
  std::vector<std::vector<PerfRef>> cell_perfs_;

  friend struct AssemblyKernel;
};

std::vector<double> assemble_residual(const FimAssembler& assembler, const SimulationState& state,
                                      const SimulationState& prev, double dt, std::span<const WellControl> controls);
JacobianSystem assemble_jacobian(const FimAssembler& assembler, const SimulationState& state,
                                 const SimulationState& prev, double dt, std::span<const WellControl> controls);

}  // namespace fimsim
