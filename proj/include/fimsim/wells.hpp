#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fimsim/grid.hpp"
#include "fimsim/props.hpp"

namespace fimsim {

enum class WellType { Injector, Producer };

enum class ControlMode { Bhp, OilRate, WaterRate, LiquidRate, ShutIn, Stop };

const char* to_string(ControlMode mode);
bool is_rate_mode(ControlMode mode);

// Rate targets are positive magnitudes in surface bbl/day (stb/day for oil);
// the well type fixes the sign. bhp_limit is a maximum for injectors and a
// minimum for producers.
struct WellControl {
  ControlMode mode = ControlMode::ShutIn;
  double target = 0.0;
  double bhp_limit = 0.0;

  bool operator==(const WellControl&) const = default;
};

struct Perforation {
  std::size_t cell = 0;
  double well_index = 0.0;  // bbl*cp/(day*psi)
  double depth = 0.0;       // ft
};

struct ScheduleEntry {
  double start = 0.0;  // day
  WellControl control;
};

struct WellSpec {
  std::string name;
  WellType type = WellType::Producer;
  double ref_depth = 0.0;  // ft
  std::vector<Perforation> perforations;
  std::vector<ScheduleEntry> schedule;  // strictly increasing start times
};

// Control of the latest schedule entry starting at or before t; nullopt when
// t precedes the first entry.
std::optional<WellControl> apply_schedule(const WellSpec& well, double t);

// Peaceman well index with r_eq = 0.14*sqrt(dx^2 + dy^2) and k = sqrt(kx*ky).
double peaceman_well_index(const StructuredGrid& grid, std::size_t cell, double radius);

// Mass rates of one perforation (lbm/day, positive into the reservoir) and
// their derivatives w.r.t. cell pressure, cell water saturation and BHP.
struct PerforationRate {
  double q_o = 0.0, dq_o_dp = 0.0, dq_o_ds = 0.0, dq_o_dpb = 0.0;
  double q_w = 0.0, dq_w_dp = 0.0, dq_w_ds = 0.0, dq_w_dpb = 0.0;
};

PerforationRate perforation_rate(const WellSpec& well, const Perforation& perf, const WellControl& control,
                                 double p_bh, const CellProperties& cell);

// Residual of the well's own equation and its derivatives. d_dp/d_ds are per
// perforation, in the same order as well.perforations.
struct WellEquation {
  double residual = 0.0;
  double d_dpb = 0.0;
  std::vector<double> d_dp;
  std::vector<double> d_ds;
};

// Well-row residual: BHP -> p_b - c; rate modes -> signed surface rate sum
// minus target (bbl/day); shut-in -> p_b pinned to the first perforation's
// oil hydrostatic value.
WellEquation constraint_residual(const WellSpec& well, const WellControl& control, double p_bh,
                                 std::span<const PerforationRate> rates, const CellProperties& first_perf_cell,
                                 const FluidModel& fluid);

// Production-positive surface rates (bbl/day) of a well, summed over perforations.
struct SurfaceRates {
  double oil = 0.0;
  double water = 0.0;
};
SurfaceRates surface_rates(std::span<const PerforationRate> rates, const FluidModel& fluid);

// Switches a rate-controlled well to BHP control when the pressure needed to
// deliver its target violates the BHP limit. rates are evaluated at any
// p_bh; they are affine in p_bh for fixed cell state.
WellControl resolve_active_constraint(const WellSpec& well, const WellControl& scheduled,
                                      std::span<const PerforationRate> rates_at_pbh, double p_bh,
                                      const FluidModel& fluid);

// Oil hydrostatic BHP referred from a perforation cell to the well's reference depth.
double hydrostatic_bhp(const WellSpec& well, const Perforation& perf, const CellProperties& cell);

}  // namespace fimsim
