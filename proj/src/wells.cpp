#include "fimsim/wells.hpp"

#include <cmath>
#include <numbers>

#include "fimsim/error.hpp"
#include "fimsim/units.hpp"

namespace fimsim {

const char* to_string(ControlMode mode) {
  switch (mode) {
    case ControlMode::Bhp: return "BHP";
    case ControlMode::OilRate: return "ORAT";
    case ControlMode::WaterRate: return "WRAT";
    case ControlMode::LiquidRate: return "LRAT";
    case ControlMode::ShutIn: return "SHUTIN";
    case ControlMode::Stop: return "STOP";
  }
  return "?";
}

bool is_rate_mode(ControlMode mode) {
  return mode == ControlMode::OilRate || mode == ControlMode::WaterRate || mode == ControlMode::LiquidRate;
}

std::optional<WellControl> apply_schedule(const WellSpec& well, double t) {
  std::optional<WellControl> active;
  for (const auto& entry : well.schedule) {
    if (entry.start <= t) active = entry.control;
    else break;
  }
  return active;
}

double peaceman_well_index(const StructuredGrid& grid, std::size_t cell, double radius) {
  if (!(radius > 0.0)) throw WellError("well radius must be positive");
  const double dx = grid.length(cell, Axis::X);
  const double dy = grid.length(cell, Axis::Y);
  const double dz = grid.length(cell, Axis::Z);
  const double k = std::sqrt(grid.perm(cell, Axis::X) * grid.perm(cell, Axis::Y));
  const double r_eq = 0.14 * std::sqrt(dx * dx + dy * dy);
  if (!(r_eq > radius)) throw WellError("well radius exceeds Peaceman equivalent radius");
  return 2.0 * std::numbers::pi * k * dz * units::kDarcy / std::log(r_eq / radius);
}

PerforationRate perforation_rate(const WellSpec& well, const Perforation& perf, const WellControl& control,
                                 double p_bh, const CellProperties& c) {
  PerforationRate r;
  if (control.mode == ControlMode::ShutIn || control.mode == ControlMode::Stop) return r;

  constexpr double g = units::kGravity;
  const double wc = perf.well_index * units::kFt3PerBbl;
  const double dz = well.ref_depth - perf.depth;

  const double dd_w = p_bh - c.p_w - g * c.rho_w * dz;
  const double ddw_dp = -1.0 - g * c.drho_w * dz;
  const double ddw_ds = -c.dpw_ds - g * c.drho_w * c.dpw_ds * dz;

  if (well.type == WellType::Injector) {
    // Injected water enters with the cell's total mobility.
    const double m = c.rho_w * c.lambda_t;
    const double dm_dp = c.drho_w * c.lambda_t + c.rho_w * c.dlambda_t_dp;
    const double dm_ds = c.drho_w * c.dpw_ds * c.lambda_t + c.rho_w * c.dlambda_t_ds;
    r.q_w = wc * m * dd_w;
    r.dq_w_dp = wc * (dm_dp * dd_w + m * ddw_dp);
    r.dq_w_ds = wc * (dm_ds * dd_w + m * ddw_ds);
    r.dq_w_dpb = wc * m;
    return r;
  }

  const double dd_o = p_bh - c.p_o - g * c.rho_o * dz;
  const double ddo_dp = -1.0 - g * c.drho_o * dz;
  r.q_o = wc * c.mob_o * dd_o;
  r.dq_o_dp = wc * (c.dmob_o_dp * dd_o + c.mob_o * ddo_dp);
  r.dq_o_ds = wc * c.dmob_o_ds * dd_o;
  r.dq_o_dpb = wc * c.mob_o;

  r.q_w = wc * c.mob_w * dd_w;
  r.dq_w_dp = wc * (c.dmob_w_dp * dd_w + c.mob_w * ddw_dp);
  r.dq_w_ds = wc * (c.dmob_w_ds * dd_w + c.mob_w * ddw_ds);
  r.dq_w_dpb = wc * c.mob_w;
  return r;
}

double hydrostatic_bhp(const WellSpec& well, const Perforation& perf, const CellProperties& cell) {
  return cell.p_o + units::kGravity * cell.rho_o * (well.ref_depth - perf.depth);
}

namespace {

// Weights converting mass rates to surface volumes for a rate mode.
struct RateWeights {
  double oil = 0.0;
  double water = 0.0;
};

RateWeights rate_weights(ControlMode mode, const FluidModel& fluid) {
  const double co = 1.0 / (units::kFt3PerBbl * fluid.oil.rho_ref);
  const double cw = 1.0 / (units::kFt3PerBbl * fluid.water.rho_ref);
  switch (mode) {
    case ControlMode::OilRate: return {co, 0.0};
    case ControlMode::WaterRate: return {0.0, cw};
    case ControlMode::LiquidRate: return {co, cw};
    default: return {};
  }
}

double sign_of(const WellSpec& well) { return well.type == WellType::Injector ? 1.0 : -1.0; }

}  // namespace

WellEquation constraint_residual(const WellSpec& well, const WellControl& control, double p_bh,
                                 std::span<const PerforationRate> rates, const CellProperties& first_perf_cell,
                                 const FluidModel& fluid) {
  const std::size_t np = well.perforations.size();
  if (rates.size() != np) throw WellError("constraint_residual: rate count does not match perforations");
  WellEquation eq;
  eq.d_dp.assign(np, 0.0);
  eq.d_ds.assign(np, 0.0);

  switch (control.mode) {
    case ControlMode::Bhp:
      eq.residual = p_bh - control.target;
      eq.d_dpb = 1.0;
      return eq;
    case ControlMode::ShutIn:
    case ControlMode::Stop: {
      const auto& perf = well.perforations.front();
      const double dz = well.ref_depth - perf.depth;
      eq.residual = p_bh - hydrostatic_bhp(well, perf, first_perf_cell);
      eq.d_dpb = 1.0;
      eq.d_dp[0] = -(1.0 + units::kGravity * first_perf_cell.drho_o * dz);
      return eq;
    }
    default: break;
  }

  if (well.type == WellType::Injector && control.mode == ControlMode::OilRate)
    throw WellError("well " + well.name + ": injectors cannot be oil-rate controlled");
  const auto wgt = rate_weights(control.mode, fluid);
  const double sign = sign_of(well);
  double total = 0.0;
  for (std::size_t m = 0; m < np; ++m) {
    const auto& r = rates[m];
    total += wgt.oil * r.q_o + wgt.water * r.q_w;
    eq.d_dp[m] = sign * (wgt.oil * r.dq_o_dp + wgt.water * r.dq_w_dp);
    eq.d_ds[m] = sign * (wgt.oil * r.dq_o_ds + wgt.water * r.dq_w_ds);
    eq.d_dpb += sign * (wgt.oil * r.dq_o_dpb + wgt.water * r.dq_w_dpb);
  }
  eq.residual = sign * total - control.target;
  return eq;
}

SurfaceRates surface_rates(std::span<const PerforationRate> rates, const FluidModel& fluid) {
  const double co = 1.0 / (units::kFt3PerBbl * fluid.oil.rho_ref);
  const double cw = 1.0 / (units::kFt3PerBbl * fluid.water.rho_ref);
  SurfaceRates s;
  for (const auto& r : rates) {
    s.oil -= r.q_o * co;
    s.water -= r.q_w * cw;
  }
  return s;
}

WellControl resolve_active_constraint(const WellSpec& well, const WellControl& scheduled,
                                      std::span<const PerforationRate> rates, double p_bh,
                                      const FluidModel& fluid) {
  if (!is_rate_mode(scheduled.mode)) return scheduled;
  const auto wgt = rate_weights(scheduled.mode, fluid);
  const double sign = sign_of(well);
  double value = 0.0;
  double slope = 0.0;
  for (const auto& r : rates) {
    value += sign * (wgt.oil * r.q_o + wgt.water * r.q_w);
    slope += sign * (wgt.oil * r.dq_o_dpb + wgt.water * r.dq_w_dpb);
  }
  WellControl bhp{ControlMode::Bhp, scheduled.bhp_limit, scheduled.bhp_limit};
  if (std::abs(slope) < 1e-300) return bhp;
  const double implied = p_bh + (scheduled.target - value) / slope;
  if (well.type == WellType::Injector && implied > scheduled.bhp_limit) return bhp;
  if (well.type == WellType::Producer && implied < scheduled.bhp_limit) return bhp;
  return scheduled;
}

}  // namespace fimsim
