#pragma once

#include "fimsim/props.hpp"
#include "fimsim/units.hpp"

namespace fimsim::detail {

enum class Phase { Oil, Water };

// Mass flux of one phase into cell a from cell b (a < b) and its
// derivatives with respect to both cells' (p, s).
struct PhaseFlux {
  double flux = 0.0;
  double trans = 0.0;  // flux / dPhi
  bool upstream_b = false;
  double d_pa = 0.0, d_sa = 0.0, d_pb = 0.0, d_sb = 0.0;
};

inline PhaseFlux phase_flux(Phase ph, double trans_geom, const CellProperties& a, const CellProperties& b, double za,
                            double zb) {
  constexpr double g = units::kGravity;
  const bool oil = ph == Phase::Oil;
  const double pa = oil ? a.p_o : a.p_w, pb = oil ? b.p_o : b.p_w;
  const double ra = oil ? a.rho_o : a.rho_w, rb = oil ? b.rho_o : b.rho_w;
  const double dra = oil ? a.drho_o : a.drho_w, drb = oil ? b.drho_o : b.drho_w;
  const double dpds_a = oil ? 0.0 : a.dpw_ds, dpds_b = oil ? 0.0 : b.dpw_ds;
  const double dz = zb - za;

  const double dphi = (pb - pa) - g * 0.5 * (ra + rb) * dz;
  const double dphi_pa = -1.0 - g * 0.5 * dra * dz;
  const double dphi_sa = -dpds_a - g * 0.5 * dra * dpds_a * dz;
  const double dphi_pb = 1.0 - g * 0.5 * drb * dz;
  const double dphi_sb = dpds_b - g * 0.5 * drb * dpds_b * dz;

  PhaseFlux f;
  f.upstream_b = dphi > 0.0;
  const CellProperties& u = f.upstream_b ? b : a;
  const double mob = oil ? u.mob_o : u.mob_w;
  const double dmob_p = oil ? u.dmob_o_dp : u.dmob_w_dp;
  const double dmob_s = oil ? u.dmob_o_ds : u.dmob_w_ds;
  const double t = trans_geom * units::kDarcy * units::kFt3PerBbl;

  f.trans = t * mob;
  f.flux = f.trans * dphi;
  f.d_pa = f.trans * dphi_pa;
  f.d_sa = f.trans * dphi_sa;
  f.d_pb = f.trans * dphi_pb;
  f.d_sb = f.trans * dphi_sb;
  if (f.upstream_b) {
    f.d_pb += t * dmob_p * dphi;
    f.d_sb += t * dmob_s * dphi;
  } else {
    f.d_pa += t * dmob_p * dphi;
    f.d_sa += t * dmob_s * dphi;
  }
  return f;
}

}  // namespace fimsim::detail
