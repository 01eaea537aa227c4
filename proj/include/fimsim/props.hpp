#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace fimsim {

struct ValueAndDerivative {
  double value = 0.0;
  double derivative = 0.0;
};

struct RockModel {
  double compressibility = 0.0;  // 1/psi
  double ref_pressure = 14.7;    // psi
};

// Single-row pressure dependence of one phase: affine density and viscosity.
struct PhasePvt {
  double rho_ref = 0.0;          // lbm/ft^3 at p_ref
  double p_ref = 14.7;           // psi
  double compressibility = 0.0;  // 1/psi
  double mu_ref = 1.0;           // cp at p_ref
  double mu_slope = 0.0;         // cp/psi
};

struct RelPermValues {
  double krw = 0.0;
  double kro = 0.0;
  double dkrw = 0.0;
  double dkro = 0.0;
};

// Piecewise-linear water/oil saturation functions. Inputs outside the node
// range are clamped; slopes at interior nodes come from the left segment.
class SatFunctionTable {
 public:
  SatFunctionTable() = default;
  SatFunctionTable(std::vector<double> sw, std::vector<double> krw, std::vector<double> kro,
                   std::vector<double> pc);

  RelPermValues rel_perm(double sw) const;
  ValueAndDerivative capillary_pressure(double sw) const;

  double min_sw() const { return sw_.front(); }
  double max_sw() const { return sw_.back(); }
  std::span<const double> sw_nodes() const { return sw_; }
  bool empty() const { return sw_.empty(); }

 private:
  struct Segment {
    std::size_t index;  // left node of the segment used for value and slope
    double t;           // position inside the segment
    bool clamped;
  };
  Segment locate(double sw) const;
  static double slope(const std::vector<double>& y, const std::vector<double>& x, std::size_t k);

  std::vector<double> sw_, krw_, kro_, pc_;
};

ValueAndDerivative porosity(double p_o, const RockModel& rock, double phi_ref);
ValueAndDerivative density(double p, const PhasePvt& pvt);
ValueAndDerivative viscosity(double p, const PhasePvt& pvt);
// z is elevation (positive up); pass -depth for grid cells.
double phase_potential(double p, double rho, double z);

struct FluidModel {
  RockModel rock;
  PhasePvt oil;
  PhasePvt water;
  SatFunctionTable sat;
};

// Everything the flow and well terms need from one cell, with derivatives
// with respect to the cell's primary unknowns (oil pressure p, water saturation s).
struct CellProperties {
  double p_o = 0.0;
  double p_w = 0.0;
  double dpw_ds = 0.0;  // dp_w/ds = -dp_c/ds

  double rho_o = 0.0, drho_o = 0.0;  // derivative w.r.t. own phase pressure
  double rho_w = 0.0, drho_w = 0.0;

  // rho*kr/mu per phase
  double mob_o = 0.0, dmob_o_dp = 0.0, dmob_o_ds = 0.0;
  double mob_w = 0.0, dmob_w_dp = 0.0, dmob_w_ds = 0.0;

  // kr_w/mu_w + kr_o/mu_o
  double lambda_t = 0.0, dlambda_t_dp = 0.0, dlambda_t_ds = 0.0;

  // Mass per bulk volume, phi*rho*s
  double mass_o = 0.0, dmass_o_dp = 0.0, dmass_o_ds = 0.0;
  double mass_w = 0.0, dmass_w_dp = 0.0, dmass_w_ds = 0.0;
};

CellProperties evaluate_cell(double p_o, double s_w, double phi_ref, const FluidModel& fluid);

}  // namespace fimsim
