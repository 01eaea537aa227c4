#include "fimsim/props.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "fimsim/error.hpp"
#include "fimsim/units.hpp"

namespace fimsim {

SatFunctionTable::SatFunctionTable(std::vector<double> sw, std::vector<double> krw, std::vector<double> kro,
                                   std::vector<double> pc)
    : sw_(std::move(sw)), krw_(std::move(krw)), kro_(std::move(kro)), pc_(std::move(pc)) {
  const std::size_t n = sw_.size();
  if (n < 2) throw PropertyError("saturation table needs at least two rows");
  if (krw_.size() != n || kro_.size() != n || pc_.size() != n)
    throw PropertyError("saturation table columns have different lengths");
  for (std::size_t i = 0; i < n; ++i) {
    if (sw_[i] < 0.0 || sw_[i] > 1.0) throw PropertyError("saturation table: s_w outside [0,1]");
    if (i > 0 && !(sw_[i] > sw_[i - 1])) throw PropertyError("saturation table: s_w not strictly increasing");
    if (krw_[i] < 0.0 || krw_[i] > 1.0 || kro_[i] < 0.0 || kro_[i] > 1.0)
      throw PropertyError("saturation table: relative permeability outside [0,1]");
    if (i > 0 && krw_[i] < krw_[i - 1]) throw PropertyError("saturation table: krw decreasing");
    if (i > 0 && kro_[i] > kro_[i - 1]) throw PropertyError("saturation table: kro increasing");
  }
}

SatFunctionTable::Segment SatFunctionTable::locate(double sw) const {
  const std::size_t n = sw_.size();
  if (sw < sw_.front()) return {0, 0.0, true};
  if (sw > sw_.back()) return {n - 2, 1.0, true};
  if (sw == sw_.front()) return {0, 0.0, false};
  // First node >= sw; the left segment ends there.
  const auto it = std::lower_bound(sw_.begin(), sw_.end(), sw);
  const std::size_t k = static_cast<std::size_t>(it - sw_.begin()) - 1;
  return {k, (sw - sw_[k]) / (sw_[k + 1] - sw_[k]), false};
}

double SatFunctionTable::slope(const std::vector<double>& y, const std::vector<double>& x, std::size_t k) {
  return (y[k + 1] - y[k]) / (x[k + 1] - x[k]);
}

RelPermValues SatFunctionTable::rel_perm(double sw) const {
  const auto seg = locate(sw);
  const std::size_t k = seg.index;
  RelPermValues out;
  out.krw = krw_[k] + seg.t * (krw_[k + 1] - krw_[k]);
  out.kro = kro_[k] + seg.t * (kro_[k + 1] - kro_[k]);
  if (seg.t == 1.0) {
    out.krw = krw_[k + 1];
    out.kro = kro_[k + 1];
  }
  if (!seg.clamped) {
    out.dkrw = slope(krw_, sw_, k);
    out.dkro = slope(kro_, sw_, k);
  }
  return out;
}

ValueAndDerivative SatFunctionTable::capillary_pressure(double sw) const {
  const auto seg = locate(sw);
  const std::size_t k = seg.index;
  ValueAndDerivative out;
  out.value = seg.t == 1.0 ? pc_[k + 1] : pc_[k] + seg.t * (pc_[k + 1] - pc_[k]);
  if (!seg.clamped) out.derivative = slope(pc_, sw_, k);
  return out;
}

ValueAndDerivative porosity(double p_o, const RockModel& rock, double phi_ref) {
  const double phi = phi_ref * (1.0 + rock.compressibility * (p_o - rock.ref_pressure));
  if (!(phi > 0.0)) throw PropertyError("porosity non-positive at p=" + std::to_string(p_o));
  return {phi, phi_ref * rock.compressibility};
}

ValueAndDerivative density(double p, const PhasePvt& pvt) {
  const double rho = pvt.rho_ref * (1.0 + pvt.compressibility * (p - pvt.p_ref));
  if (!(rho > 0.0)) throw PropertyError("density non-positive at p=" + std::to_string(p));
  return {rho, pvt.rho_ref * pvt.compressibility};
}

ValueAndDerivative viscosity(double p, const PhasePvt& pvt) {
  const double mu = pvt.mu_ref + pvt.mu_slope * (p - pvt.p_ref);
  if (!(mu > 0.0)) throw PropertyError("viscosity non-positive at p=" + std::to_string(p));
  return {mu, pvt.mu_slope};
}

double phase_potential(double p, double rho, double z) { return p + rho * units::kGravity * z; }

CellProperties evaluate_cell(double p, double s, double phi_ref, const FluidModel& fluid) {
  CellProperties c;
  const auto pc = fluid.sat.capillary_pressure(s);
  const auto kr = fluid.sat.rel_perm(s);
  const auto phi = porosity(p, fluid.rock, phi_ref);

  c.p_o = p;
  c.p_w = p - pc.value;
  c.dpw_ds = -pc.derivative;

  const auto rho_o = density(c.p_o, fluid.oil);
  const auto mu_o = viscosity(c.p_o, fluid.oil);
  const auto rho_w = density(c.p_w, fluid.water);
  const auto mu_w = viscosity(c.p_w, fluid.water);
  c.rho_o = rho_o.value;
  c.drho_o = rho_o.derivative;
  c.rho_w = rho_w.value;
  c.drho_w = rho_w.derivative;

  // d(rho/mu)/dp for each phase
  const double ro_mu_o = (rho_o.derivative * mu_o.value - rho_o.value * mu_o.derivative) / (mu_o.value * mu_o.value);
  const double ro_mu_w = (rho_w.derivative * mu_w.value - rho_w.value * mu_w.derivative) / (mu_w.value * mu_w.value);

  c.mob_o = rho_o.value * kr.kro / mu_o.value;
  c.dmob_o_dp = kr.kro * ro_mu_o;
  c.dmob_o_ds = rho_o.value * kr.dkro / mu_o.value;

  c.mob_w = rho_w.value * kr.krw / mu_w.value;
  c.dmob_w_dp = kr.krw * ro_mu_w;
  c.dmob_w_ds = rho_w.value * kr.dkrw / mu_w.value + kr.krw * ro_mu_w * c.dpw_ds;

  const double inv_mu_o2 = 1.0 / (mu_o.value * mu_o.value);
  const double inv_mu_w2 = 1.0 / (mu_w.value * mu_w.value);
  c.lambda_t = kr.krw / mu_w.value + kr.kro / mu_o.value;
  c.dlambda_t_dp = -kr.krw * mu_w.derivative * inv_mu_w2 - kr.kro * mu_o.derivative * inv_mu_o2;
  c.dlambda_t_ds = kr.dkrw / mu_w.value - kr.krw * mu_w.derivative * inv_mu_w2 * c.dpw_ds + kr.dkro / mu_o.value;

  const double so = 1.0 - s;
  c.mass_o = phi.value * rho_o.value * so;
  c.dmass_o_dp = (phi.derivative * rho_o.value + phi.value * rho_o.derivative) * so;
  c.dmass_o_ds = -phi.value * rho_o.value;

  c.mass_w = phi.value * rho_w.value * s;
  c.dmass_w_dp = (phi.derivative * rho_w.value + phi.value * rho_w.derivative) * s;
  c.dmass_w_ds = phi.value * rho_w.value + phi.value * rho_w.derivative * c.dpw_ds * s;
  return c;
}

}  // namespace fimsim
