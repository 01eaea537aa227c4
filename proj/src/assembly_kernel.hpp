#pragma once

#include <algorithm>
#include <span>
#include <string>
#include <vector>

#include "fimsim/discretization.hpp"
#include "fimsim/error.hpp"
#include "flux.hpp"

namespace fimsim {

using detail::Phase;
using detail::phase_flux;

// Row kernels shared by the parallel and the reference assembly paths. The
// order of additions into each residual entry is the same in both.
struct AssemblyKernel {
  const FimAssembler& as;
  std::span<const double> x;
  double dt;
  std::span<const WellControl> controls;
  std::vector<double>& res;
  CsrMatrix* jac;

  void add(std::size_t row, std::size_t col, double v) const {
    if (jac) jac->values()[jac->position(row, col)] += v;
  }

  // Residual rows of cell c. props(cell) must be valid for c and its neighbours.
  template <class Props>
  void cell_rows(std::size_t c, const Props& props, const CellProperties& prev, std::vector<PerforationRate>* rates,
                 CellProperties* first_perf) const {
    const auto& model = *as.model_;
    const auto& grid = model.grid;
    const auto& bm = as.blocks_;
    const std::size_t ro = bm.pressure(c), rw = bm.saturation(c);
    const CellProperties& cp = props(c);

    const double vdt = grid.volume(c) / dt;
    res[ro] += vdt * (cp.mass_o - prev.mass_o);
    res[rw] += vdt * (cp.mass_w - prev.mass_w);
    add(ro, bm.pressure(c), vdt * cp.dmass_o_dp);
    add(ro, bm.saturation(c), vdt * cp.dmass_o_ds);
    add(rw, bm.pressure(c), vdt * cp.dmass_w_dp);
    add(rw, bm.saturation(c), vdt * cp.dmass_w_ds);

    for (std::size_t q = as.conn_ptr_[c]; q < as.conn_ptr_[c + 1]; ++q) {
      const std::size_t nb = as.conn_[q].neighbor;
      const std::size_t a = std::min(c, nb), b = std::max(c, nb);
      const double sign = c == a ? 1.0 : -1.0;  // inflow into c
      for (Phase ph : {Phase::Oil, Phase::Water}) {
        const auto f = phase_flux(ph, as.conn_[q].trans_geom, props(a), props(b), grid.depth(a), grid.depth(b));
        const std::size_t row = ph == Phase::Oil ? ro : rw;
        res[row] -= sign * f.flux;
        add(row, bm.pressure(a), -sign * f.d_pa);
        add(row, bm.saturation(a), -sign * f.d_sa);
        add(row, bm.pressure(b), -sign * f.d_pb);
        add(row, bm.saturation(b), -sign * f.d_sb);
      }
    }

    for (const auto& pr : as.cell_perfs_[c]) {
      const auto& well = model.wells[as.active_[pr.well]];
      const auto& perf = well.perforations[pr.perf];
      const double pbh = x[bm.well(pr.well)];
      const auto r = perforation_rate(well, perf, controls[pr.well], pbh, cp);
      res[ro] -= r.q_o;
      res[rw] -= r.q_w;
      add(ro, bm.pressure(c), -r.dq_o_dp);
      add(ro, bm.saturation(c), -r.dq_o_ds);
      add(ro, bm.well(pr.well), -r.dq_o_dpb);
      add(rw, bm.pressure(c), -r.dq_w_dp);
      add(rw, bm.saturation(c), -r.dq_w_ds);
      add(rw, bm.well(pr.well), -r.dq_w_dpb);
      rates[pr.well][pr.perf] = r;
      if (pr.perf == 0) first_perf[pr.well] = cp;
    }
  }

  void well_rows(const std::vector<std::vector<PerforationRate>>& rates,
                 const std::vector<CellProperties>& first_perf) const {
    const auto& model = *as.model_;
    const auto& bm = as.blocks_;
    for (std::size_t k = 0; k < as.active_.size(); ++k) {
      const auto& well = model.wells[as.active_[k]];
      const std::size_t row = bm.well(k);
      const auto eq = constraint_residual(well, controls[k], x[row], rates[k], first_perf[k], model.fluid);
      res[row] = eq.residual;
      add(row, row, eq.d_dpb);
      for (std::size_t m = 0; m < well.perforations.size(); ++m) {
        const std::size_t c = well.perforations[m].cell;
        add(row, bm.pressure(c), eq.d_dp[m]);
        add(row, bm.saturation(c), eq.d_ds[m]);
      }
    }
  }
};

inline void check_assembly_inputs(const FimAssembler& as, std::span<const double> x, const SimulationState& prev, double dt,
                  std::span<const WellControl> controls, const CsrMatrix* jac) {
  if (!(dt > 0.0)) throw AssemblyError("time step must be positive, got " + std::to_string(dt));
  if (x.size() != as.blocks().size()) throw AssemblyError("unknown vector has wrong length");
  if (prev.p.size() != as.blocks().n_cells || prev.s.size() != as.blocks().n_cells)
    throw AssemblyError("previous state has wrong size");
  if (controls.size() != as.active_wells().size()) throw AssemblyError("one control per active well required");
  if (jac && !jac->same_pattern(as.pattern())) throw AssemblyError("Jacobian does not carry the assembly pattern");
}

inline std::vector<std::vector<PerforationRate>> rate_storage(const ReservoirModel& model,
                                                       const std::vector<std::size_t>& active) {
  std::vector<std::vector<PerforationRate>> rates(active.size());
  for (std::size_t k = 0; k < active.size(); ++k) rates[k].resize(model.wells[active[k]].perforations.size());
  return rates;
}


}  // namespace fimsim
