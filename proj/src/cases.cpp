#include "fimsim/cases.hpp"

#include <array>
#include <cmath>
#include <random>

namespace fimsim {

namespace {

FluidModel standard_fluid() {
  FluidModel f;
  f.rock = {5e-6, 14.7};
  f.oil = {46.244, 14.7, 2e-5, 1.2, 1e-5};
  f.water = {62.419, 14.7, 3e-6, 0.5, 0.0};
  std::vector<double> sw, krw, kro, pc;
  for (int q = 0; q <= 8; ++q) {
    const double s = 0.2 + 0.1 * q;
    sw.push_back(s);
    krw.push_back(std::pow(q / 8.0, 2));
    kro.push_back(q < 6 ? std::pow((6 - q) / 6.0, 2) : 0.0);
    pc.push_back(0.0);
  }
  f.sat = SatFunctionTable(sw, krw, kro, pc);
  return f;
}

}  // namespace

Deck make_closed_box_deck(int nx, int ny, int nz) {
  Deck d;
  d.geometry.nx = nx;
  d.geometry.ny = ny;
  d.geometry.nz = nz;
  d.geometry.dx = {100.0};
  d.geometry.dy = {100.0};
  d.geometry.dz = {20.0};
  d.geometry.top_depth = 4000.0;
  d.geometry.permx = {100.0};
  d.geometry.permy = {100.0};
  d.geometry.permz = {10.0};
  d.geometry.poro = {0.2};
  d.fluid = standard_fluid();
  d.equil = EquilibriumSpec{4000.0, 3000.0, 4000.0 + 20.0 * nz};
  return d;
}

Deck make_waterflood_deck(std::uint64_t seed, const WaterfloodOptions& o) {
  Deck d = make_closed_box_deck(o.nx, o.ny, o.nz);
  d.equil->woc_depth = 1e5;

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> z(0.0, 1.0);
  const std::size_t n = static_cast<std::size_t>(o.nx) * o.ny * o.nz;
  auto& g = d.geometry;
  g.permx.resize(n);
  g.permy.resize(n);
  g.permz.resize(n);
  for (std::size_t c = 0; c < n; ++c) {
    const double k = o.mean_perm * std::exp(o.sigma * z(rng));
    g.permx[c] = k;
    g.permy[c] = k;
    g.permz[c] = 0.1 * k;
  }

  WellSpec inj;
  inj.name = "INJ";
  inj.type = WellType::Injector;
  inj.ref_depth = *g.top_depth;
  inj.schedule.push_back({0.0, {ControlMode::WaterRate, o.injection_rate, 6000.0}});
  d.wells = {inj};
  const int ci = o.nx / 2, cj = o.ny / 2;
  for (int k = 0; k < o.nz; ++k) d.completions.push_back({"INJ", ci, cj, k, std::nullopt, 0.25, 0});

  const std::array<std::array<int, 2>, 4> corners{{{0, 0}, {o.nx - 1, 0}, {0, o.ny - 1}, {o.nx - 1, o.ny - 1}}};
  for (std::size_t q = 0; q < corners.size(); ++q) {
    WellSpec prod;
    prod.name = "PROD" + std::to_string(q + 1);
    prod.type = WellType::Producer;
    prod.ref_depth = *g.top_depth;
    prod.schedule.push_back({0.0, {ControlMode::Bhp, o.production_bhp, o.production_bhp}});
    d.wells.push_back(prod);
    for (int k = 0; k < o.nz; ++k)
      d.completions.push_back({prod.name, corners[q][0], corners[q][1], k, std::nullopt, 0.25, 0});
  }
  d.end_time = o.end_time;
  d.solver.timestep = {1.0, 10.0, 1e-6, 2.0, 0.5};
  return d;
}

}  // namespace fimsim
