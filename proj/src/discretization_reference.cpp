#include <vector>

#include "assembly_kernel.hpp"
#include "fimsim/discretization.hpp"

namespace fimsim {

void FimAssembler::assemble_reference(std::span<const double> x, const SimulationState& prev, double dt,
                                      std::span<const WellControl> controls, std::vector<double>& residual,
                                      CsrMatrix* jac) const {
  check_assembly_inputs(*this, x, prev, dt, controls, jac);
  const std::size_t n = blocks_.n_cells;
  const auto& model = *model_;
  residual.assign(blocks_.size(), 0.0);
  if (jac) std::fill(jac->values().begin(), jac->values().end(), 0.0);

  std::vector<CellProperties> props(n);
  for (std::size_t c = 0; c < n; ++c) props[c] = evaluate_cell(x[c], x[n + c], model.grid.phi_ref(c), model.fluid);
  auto global_props = [&](std::size_t cell) -> const CellProperties& { return props[cell]; };

  auto rates = rate_storage(model, active_);
  std::vector<CellProperties> first_perf(active_.size());
  AssemblyKernel kernel{*this, x, dt, controls, residual, jac};
  for (std::size_t c = 0; c < n; ++c) {
    const auto prev_props = evaluate_cell(prev.p[c], prev.s[c], model.grid.phi_ref(c), model.fluid);
    kernel.cell_rows(c, global_props, prev_props, rates.data(), first_perf.data());
  }
  kernel.well_rows(rates, first_perf);
}

}  // namespace fimsim
