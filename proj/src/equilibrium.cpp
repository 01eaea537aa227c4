#include <cmath>

#include "fimsim/discretization.hpp"
#include "fimsim/error.hpp"
#include "fimsim/units.hpp"

namespace fimsim {

namespace {

// Pressure at depth z in a static column of a phase with affine density,
// starting from p0 at z0: dp/dz = g*rho(p).
double hydrostatic(double p0, double z0, double z, const PhasePvt& pvt) {
  const double g = units::kGravity;
  const double dz = z - z0;
  const double u0 = 1.0 + pvt.compressibility * (p0 - pvt.p_ref);
  if (pvt.compressibility == 0.0) return p0 + g * pvt.rho_ref * dz;
  return p0 + u0 * std::expm1(pvt.compressibility * g * pvt.rho_ref * dz) / pvt.compressibility;
}

}  // namespace

SimulationState initialize_equilibrium(const EquilibriumSpec& eq, const ReservoirModel& model) {
  const auto& grid = model.grid;
  const auto& fluid = model.fluid;
  if (fluid.sat.empty()) throw PropertyError("equilibration needs a saturation table");
  if (!(eq.ref_pressure > 0.0)) throw PropertyError("equilibration reference pressure must be positive");

  const double sw_oil = fluid.sat.min_sw();
  const double sw_water = fluid.sat.max_sw();
  const double pc_water = fluid.sat.capillary_pressure(sw_water).value;
  const bool ref_in_oil = eq.ref_depth <= eq.woc_depth;

  // Phase pressure at depth z, integrated from the reference through the contact.
  auto oil_pressure = [&](double z) {
    if (ref_in_oil) return hydrostatic(eq.ref_pressure, eq.ref_depth, z, fluid.oil);
    const double pw_woc = hydrostatic(eq.ref_pressure - pc_water, eq.ref_depth, eq.woc_depth, fluid.water);
    return hydrostatic(pw_woc, eq.woc_depth, z, fluid.oil);
  };
  auto water_pressure = [&](double z) {
    if (!ref_in_oil) return hydrostatic(eq.ref_pressure - pc_water, eq.ref_depth, z, fluid.water);
    const double po_woc = hydrostatic(eq.ref_pressure, eq.ref_depth, eq.woc_depth, fluid.oil);
    return hydrostatic(po_woc, eq.woc_depth, z, fluid.water);
  };

  const std::size_t n = grid.num_cells();
  SimulationState st;
  st.p.resize(n);
  st.s.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double z = grid.depth(c);
    if (z < eq.woc_depth || (z == eq.woc_depth && ref_in_oil)) {
      st.p[c] = oil_pressure(z);
      st.s[c] = sw_oil;
    } else {
      st.p[c] = water_pressure(z) + pc_water;
      st.s[c] = sw_water;
    }
  }

  st.pb.resize(model.wells.size());
  for (std::size_t w = 0; w < model.wells.size(); ++w) {
    const auto& well = model.wells[w];
    if (well.perforations.empty()) throw WellError("well " + well.name + " has no perforations");
    const auto& perf = well.perforations.front();
    const auto cp = evaluate_cell(st.p[perf.cell], st.s[perf.cell], grid.phi_ref(perf.cell), fluid);
    st.pb[w] = hydrostatic_bhp(well, perf, cp);
  }
  st.t = 0.0;
  return st;
}

}  // namespace fimsim
